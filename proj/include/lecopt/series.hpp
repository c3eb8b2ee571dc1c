#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lecopt {

using Timestamp = std::chrono::sys_seconds;

inline constexpr std::chrono::seconds kHour{3600};

/// Parses an ISO-8601 timestamp ("2022-03-03T00:00:00", "2022-03-03 00:00",
/// optional trailing "Z"). Offsets other than Z are rejected.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SS"
std::string format_timestamp(Timestamp ts);

/// Hourly values anchored at `start`. Value i belongs to the hour
/// beginning at start + i hours.
class HourlySeries {
 public:
  HourlySeries() = default;
  HourlySeries(Timestamp start, std::vector<double> values)
      : start_(start), values_(std::move(values)) {}

  /// Constant series, convenient for tests and defaults.
  static HourlySeries constant(Timestamp start, std::size_t hours, double value) {
    return HourlySeries(start, std::vector<double>(hours, value));
  }

  Timestamp start() const { return start_; }
  Timestamp timestamp(std::size_t i) const {
    return start_ + kHour * static_cast<long>(i);
  }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

  /// Sub-range [first, first + count).
  HourlySeries slice(std::size_t first, std::size_t count) const;

  bool aligned_with(const HourlySeries& other) const {
    return start_ == other.start_ && size() == other.size();
  }

  friend bool operator==(const HourlySeries&, const HourlySeries&) = default;

 private:
  Timestamp start_{};
  std::vector<double> values_;
};

}  // namespace lecopt
