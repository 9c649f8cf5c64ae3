#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace fibz::golden {

/// One row of the published orbit table: z(n), z^2(n), ... with the entries
/// that are fixed points marked bold.
struct OrbitRow {
  std::uint64_t n;
  std::vector<std::uint64_t> chain;
  std::vector<bool> bold;
};

// The published row for n = 5 prints its single entry without bold markup
// although 5 is a fixed point; the bold flag below follows the caption
// ("numbers in bold are fixed points").
inline const std::vector<OrbitRow>& orbit_table() {
  static const std::vector<OrbitRow> rows = {
      {1, {1}, {true}},
      {2, {3, 4, 6, 12}, {false, false, false, true}},
      {3, {4, 6, 12}, {false, false, true}},
      {4, {6, 12}, {false, true}},
      {5, {5}, {true}},
      {6, {12}, {true}},
      {7, {8, 6, 12}, {false, false, true}},
      {8, {6, 12}, {false, true}},
      {9, {12}, {true}},
      {10, {15, 20, 30, 60}, {false, false, false, true}},
      {11, {10, 15, 20, 30, 60}, {false, false, false, false, true}},
      {12, {12}, {true}},
  };
  return rows;
}

/// First n taking exactly k iterations (k >= 1 counting) and its fixed point.
struct FirstOrderRow {
  unsigned k;
  std::uint64_t n;
  std::uint64_t fixed_point;
};

inline constexpr std::array<FirstOrderRow, 10> kFirstOrderTable = {{
    {1, 1, 1},
    {2, 4, 12},
    {3, 3, 12},
    {4, 2, 12},
    {5, 11, 60},
    {6, 89, 60},
    {7, 1069, 60},
    {8, 2137, 60},
    {9, 4273, 60},
    {10, 59833, 60},
}};

}  // namespace fibz::golden
