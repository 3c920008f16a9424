#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "qsocket/helmholtz.hpp"

namespace qsocket {

void write_field_csv(std::ostream& out, const FieldMap& field) {
  const int r = field.grid.resolution;
  fmt::print(out, "# side_m={:.9e},resolution={}\n", field.grid.side, r);
  for (int k = 0; k < r; ++k) {
    for (int i = 0; i < r; ++i) {
      if (i > 0) out << ',';
      fmt::print(out, "{:.6g}", field.at(i, k));
    }
    out << '\n';
  }
}

void write_field_pgm(std::ostream& out, const FieldMap& field) {
  const int r = field.grid.resolution;
  const double peak = field.values.empty()
                          ? 0.0
                          : *std::max_element(field.values.begin(), field.values.end());
  fmt::print(out, "P5\n{} {}\n255\n", r, r);
  for (int k = r - 1; k >= 0; --k) {
    for (int i = 0; i < r; ++i) {
      const double v = peak > 0.0 ? field.at(i, k) / peak : 0.0;
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * v))));
    }
  }
}

}  // namespace qsocket
