#pragma once
// Byte-level scanner shared by the strict token decoder and the lenient
// response parser.

#include <cctype>
#include <charconv>
#include <cstddef>
#include <optional>
#include <string_view>
#include <system_error>

namespace auhead::detail {

class Scanner {
 public:
  explicit Scanner(std::string_view text, std::size_t pos = 0) : text_(text), pos_(pos) {}

  std::size_t pos() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ >= text_.size(); }
  char peek() const noexcept { return at_end() ? '\0' : text_[pos_]; }

  bool consume(char c) noexcept {
    if (peek() != c || at_end()) return false;
    ++pos_;
    return true;
  }

  bool consume(std::string_view literal) noexcept {
    if (text_.substr(pos_, literal.size()) != literal) return false;
    pos_ += literal.size();
    return true;
  }

  void skip_ws() noexcept {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  /// [-]digits
  std::optional<long long> scan_int() noexcept {
    const std::size_t start = pos_;
    if (peek() == '-') ++pos_;
    const std::size_t digits_start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits_start) {
      pos_ = start;
      return std::nullopt;
    }
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{} || ptr != text_.data() + pos_) {
      pos_ = start;
      return std::nullopt;
    }
    return value;
  }

  /// [-]digits[.digits] or [-].digits, at least one digit overall.
  std::optional<double> scan_number() noexcept {
    const std::size_t start = pos_;
    if (peek() == '-') ++pos_;
    std::size_t digits = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_, ++digits;
    if (peek() == '.') {
      ++pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_, ++digits;
    }
    if (digits == 0) {
      pos_ = start;
      return std::nullopt;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{} || ptr != text_.data() + pos_) {
      pos_ = start;
      return std::nullopt;
    }
    return value;
  }

 private:
  std::string_view text_;
  std::size_t pos_;
};

}  // namespace auhead::detail
