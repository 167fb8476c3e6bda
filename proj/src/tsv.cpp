#include "schwinger/tsv.hpp"

#include <fmt/format.h>

namespace schwinger::tsv {

std::string num(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  return fmt::format("{:.10e}", x);
}

std::string fixed(double x, int decimals) {
  if (x == 0.0) x = 0.0;
  return fmt::format("{:.{}f}", x, decimals);
}

}  // namespace schwinger::tsv
