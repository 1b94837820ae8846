#ifndef PICTOPIPE_STRINGS_H_
#define PICTOPIPE_STRINGS_H_

#include <string>
#include <string_view>
#include <vector>

namespace pictopipe {

// ASCII-only case folding. Bytes >= 0x80 (UTF-8 sequences) pass through.
std::string to_lower(std::string_view s);

std::string_view trim(std::string_view s);

// Splits on runs of ASCII whitespace; never yields empty pieces.
std::vector<std::string> split_whitespace(std::string_view s);

// Splits on a single delimiter; keeps empty fields.
std::vector<std::string> split(std::string_view s, char delim);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool is_ascii_space(char c);
bool is_ascii_punct(char c);
bool is_valid_utf8(std::string_view s);

// True if the first character is an ASCII uppercase letter.
bool starts_upper(std::string_view s);

// Copies the capitalization pattern of `model` onto `word`: all-caps stays
// all-caps (for words longer than one letter), Title case becomes Title case.
std::string match_case(std::string_view model, std::string_view word);

// Reads every line of a stream, stripping a trailing '\r'.
std::vector<std::string> read_lines(std::istream& in);

}  // namespace pictopipe

#endif  // PICTOPIPE_STRINGS_H_
