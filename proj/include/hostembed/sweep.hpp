#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hostembed {

enum class Quantity {
  cost_ratio_new,
  cost_ratio_legacy,
  mmse_ratio_new,
  mmse_ratio_legacy,
  power_ratio,
};

std::string_view to_string(Quantity q);
std::optional<Quantity> parse_quantity(std::string_view name);

// log10_k: log10 of k; log10_sigma: log10 of sigma; sigma2; power;
// mmse: target distortion as a fraction of sigma^2/(sigma^2+1).
enum class AxisName { log10_k, log10_sigma, sigma2, power, mmse };

std::string_view to_string(AxisName a);
std::optional<AxisName> parse_axis_name(std::string_view name);

enum class AxisScale { linear, log10 };

struct Axis {
  AxisName name = AxisName::log10_k;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t count = 2;
  AxisScale scale = AxisScale::linear;

  void validate() const;
  // Axis coordinate of sample i (first = lo, last = hi).
  double value(std::size_t i) const;
};

// Grammar name:lo:hi:count with an optional trailing :log10 or :linear.
Axis parse_axis(std::string_view text);
std::string format_axis(const Axis& axis);

// Point at which a quantity is evaluated.
struct CellParams {
  double k2 = 1.0;
  double sigma2 = 1.0;
  double power = 1.0;
  double rate = 0.0;
  double mmse_fraction = 0.5;
};

// Upper bound over lower bound of the requested quantity; 0/0 gives 1 and a
// positive value over 0 gives +infinity.
double evaluate_quantity(Quantity q, const CellParams& cell);

struct SweepSpec {
  Axis axis1;
  Axis axis2;
  Quantity quantity = Quantity::cost_ratio_new;
  CellParams fixed;  // values of the parameters not on an axis

  void validate() const;
};

// Cell parameters at grid position (i, j).
CellParams cell_at(const SweepSpec& spec, std::size_t i, std::size_t j);

struct SweepRow {
  double axis1 = 0.0;
  double axis2 = 0.0;
  double value = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // axis1 outer, axis2 inner
  double max_value = 0.0;
  double argmax_axis1 = 0.0;
  double argmax_axis2 = 0.0;
};

SweepResult run_sweep(const SweepSpec& spec, std::size_t workers = 1);

// Number formatting shared by every emitter: 12 significant digits, "inf"
// for the divergent cells.
std::string format_number(double v);

void emit_csv(const SweepResult& result, std::ostream& out);
// Throws IoError when the file cannot be written.
void emit_csv(const SweepResult& result, const std::string& path);

}  // namespace hostembed
