#include "lecopt/series.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace lecopt {

namespace {

bool read_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) return false;
  const char* first = text.data() + pos;
  const char* last = first + len;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  if (!text.empty() && text.back() == 'Z') text.remove_suffix(1);

  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (!read_int(text, 0, 4, y) || !read_int(text, 5, 2, mo) || !read_int(text, 8, 2, d)) {
    return std::nullopt;
  }
  if (text.size() > 10) {
    if (text[10] != 'T' && text[10] != ' ') return std::nullopt;
    if (text.size() != 16 && text.size() != 19) return std::nullopt;
    if (text[13] != ':' || !read_int(text, 11, 2, h) || !read_int(text, 14, 2, mi)) {
      return std::nullopt;
    }
    if (text.size() == 19 && (text[16] != ':' || !read_int(text, 17, 2, s))) {
      return std::nullopt;
    }
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59 || h < 0 || mi < 0 || s < 0) {
    return std::nullopt;
  }
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto day_start = floor<days>(ts);
  const year_month_day ymd{day_start};
  const hh_mm_ss hms{ts - day_start};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ld",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<long>(hms.hours().count()),
                static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()));
  return buf;
}

HourlySeries HourlySeries::slice(std::size_t first, std::size_t count) const {
  if (first + count > values_.size()) {
    throw std::out_of_range("HourlySeries::slice beyond end of series");
  }
  return HourlySeries(timestamp(first),
                      std::vector<double>(values_.begin() + static_cast<long>(first),
                                          values_.begin() + static_cast<long>(first + count)));
}

}  // namespace lecopt
