#include "hostembed/sweep.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "hostembed/achievability.hpp"
#include "hostembed/errors.hpp"
#include "hostembed/lower_bounds.hpp"
#include "hostembed/parallel.hpp"
#include "hostembed/weighted_cost.hpp"

namespace hostembed {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio(double upper, double lower) {
  if (lower == 0.0) return upper == 0.0 ? 1.0 : kInf;
  return upper / lower;
}

double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

void assign(CellParams& cell, AxisName name, double v) {
  switch (name) {
    case AxisName::log10_k: cell.k2 = std::pow(10.0, 2.0 * v); break;
    case AxisName::log10_sigma: cell.sigma2 = std::pow(10.0, 2.0 * v); break;
    case AxisName::sigma2: cell.sigma2 = v; break;
    case AxisName::power: cell.power = v; break;
    case AxisName::mmse: cell.mmse_fraction = v; break;
  }
}

bool sets_sigma(AxisName a) { return a == AxisName::log10_sigma || a == AxisName::sigma2; }

}  // namespace

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::cost_ratio_new: return "cost_ratio_new";
    case Quantity::cost_ratio_legacy: return "cost_ratio_legacy";
    case Quantity::mmse_ratio_new: return "mmse_ratio_new";
    case Quantity::mmse_ratio_legacy: return "mmse_ratio_legacy";
    case Quantity::power_ratio: return "power_ratio";
  }
  return "unknown";
}

std::optional<Quantity> parse_quantity(std::string_view name) {
  for (Quantity q : {Quantity::cost_ratio_new, Quantity::cost_ratio_legacy, Quantity::mmse_ratio_new,
                     Quantity::mmse_ratio_legacy, Quantity::power_ratio}) {
    if (to_string(q) == name) return q;
  }
  return std::nullopt;
}

std::string_view to_string(AxisName a) {
  switch (a) {
    case AxisName::log10_k: return "log10_k";
    case AxisName::log10_sigma: return "log10_sigma";
    case AxisName::sigma2: return "sigma2";
    case AxisName::power: return "power";
    case AxisName::mmse: return "mmse";
  }
  return "unknown";
}

std::optional<AxisName> parse_axis_name(std::string_view name) {
  for (AxisName a : {AxisName::log10_k, AxisName::log10_sigma, AxisName::sigma2, AxisName::power,
                     AxisName::mmse}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

void Axis::validate() const {
  if (count < 2) throw ValidationError("axis " + std::string(to_string(name)) + " needs at least 2 points");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw ValidationError("axis " + std::string(to_string(name)) + " needs finite lo < hi");
  }
  if (scale == AxisScale::log10 && !(lo > 0.0)) {
    throw ValidationError("log-scale axis " + std::string(to_string(name)) + " needs positive bounds");
  }
  if (name == AxisName::mmse && (lo < 0.0 || hi > 1.0)) {
    throw ValidationError("mmse axis is a fraction of sigma^2/(sigma^2+1) and must lie in [0, 1]");
  }
  if ((name == AxisName::sigma2 && !(lo > 0.0)) || (name == AxisName::power && lo < 0.0)) {
    throw ValidationError("axis " + std::string(to_string(name)) + " is out of range");
  }
}

double Axis::value(std::size_t i) const {
  if (i + 1 == count) return hi;
  const double t = static_cast<double>(i) / static_cast<double>(count - 1);
  if (scale == AxisScale::log10) {
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    return std::pow(10.0, a + (b - a) * t);
  }
  return lo + (hi - lo) * t;
}

Axis parse_axis(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() != 4 && parts.size() != 5) {
    throw ValidationError("axis '" + std::string(text) + "' must be name:lo:hi:count[:log10]");
  }
  Axis axis;
  const auto name = parse_axis_name(parts[0]);
  if (!name) throw ValidationError("unknown axis name '" + std::string(parts[0]) + "'");
  axis.name = *name;
  axis.lo = parse_double(parts[1], "axis lower bound");
  axis.hi = parse_double(parts[2], "axis upper bound");
  const double count = parse_double(parts[3], "axis count");
  if (!(count >= 0.0) || count != std::floor(count) || count > 1e7) {
    throw ValidationError("axis count must be a non-negative integer");
  }
  axis.count = static_cast<std::size_t>(count);
  if (parts.size() == 5) {
    if (parts[4] == "log10") {
      axis.scale = AxisScale::log10;
    } else if (parts[4] != "linear") {
      throw ValidationError("axis scale must be linear or log10");
    }
  }
  axis.validate();
  return axis;
}

std::string format_axis(const Axis& axis) {
  std::string out = std::string(to_string(axis.name)) + ":" + format_number(axis.lo) + ":" +
                    format_number(axis.hi) + ":" + std::to_string(axis.count);
  if (axis.scale == AxisScale::log10) out += ":log10";
  return out;
}

double evaluate_quantity(Quantity q, const CellParams& cell) {
  switch (q) {
    case Quantity::cost_ratio_new:
    case Quantity::cost_ratio_legacy: {
      const WeightedCostParams p = make_cost_params(cell.k2, cell.sigma2, cell.rate);
      const BoundVariant v =
          q == Quantity::cost_ratio_new ? BoundVariant::full : BoundVariant::legacy;
      return ratio(cost_upper(p).value, cost_lower(p, v).value);
    }
    case Quantity::mmse_ratio_new:
    case Quantity::mmse_ratio_legacy: {
      const ProblemParams p = make_params(cell.sigma2, cell.power, cell.rate);
      const BoundVariant v =
          q == Quantity::mmse_ratio_new ? BoundVariant::full : BoundVariant::legacy;
      return ratio(mmse_upper_numeric(p).mmse, mmse_lower(p, v).value);
    }
    case Quantity::power_ratio: {
      make_params(cell.sigma2, 0.0, cell.rate);
      if (!(cell.mmse_fraction >= 0.0 && cell.mmse_fraction <= 1.0)) {
        throw ValidationError("mmse fraction must lie in [0, 1]");
      }
      const double target = cell.mmse_fraction * cell.sigma2 / (cell.sigma2 + 1.0);
      return ratio(power_upper_for_mmse(cell.sigma2, cell.rate, target),
                   power_lower_for_mmse(cell.sigma2, cell.rate, target).power);
    }
  }
  throw ValidationError("unknown quantity");
}

void SweepSpec::validate() const {
  axis1.validate();
  axis2.validate();
  if (axis1.name == axis2.name || (sets_sigma(axis1.name) && sets_sigma(axis2.name))) {
    throw ValidationError("the two axes must set different parameters");
  }
  if (!(fixed.rate >= 0.0) || !std::isfinite(fixed.rate)) throw ValidationError("rate must be non-negative");
  if ((quantity == Quantity::cost_ratio_legacy || quantity == Quantity::mmse_ratio_legacy) &&
      fixed.rate != 0.0) {
    throw UnsupportedVariantError("the legacy bound is defined for rate 0 only");
  }
}

CellParams cell_at(const SweepSpec& spec, std::size_t i, std::size_t j) {
  CellParams cell = spec.fixed;
  assign(cell, spec.axis1.name, spec.axis1.value(i));
  assign(cell, spec.axis2.name, spec.axis2.value(j));
  return cell;
}

SweepResult run_sweep(const SweepSpec& spec, std::size_t workers) {
  spec.validate();
  const std::size_t n1 = spec.axis1.count;
  const std::size_t n2 = spec.axis2.count;
  SweepResult result;
  result.rows.resize(n1 * n2);
  parallel_for(n1 * n2, workers, [&](std::size_t idx) {
    const std::size_t i = idx / n2;
    const std::size_t j = idx % n2;
    result.rows[idx] = {spec.axis1.value(i), spec.axis2.value(j),
                        evaluate_quantity(spec.quantity, cell_at(spec, i, j))};
  });
  const SweepRow* best = &result.rows.front();
  for (const SweepRow& row : result.rows) {
    if (row.value > best->value) best = &row;
  }
  result.max_value = best->value;
  result.argmax_axis1 = best->axis1;
  result.argmax_axis2 = best->axis2;
  return result;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void emit_csv(const SweepResult& result, std::ostream& out) {
  out << "axis1,axis2,value\n";
  for (const SweepRow& row : result.rows) {
    out << format_number(row.axis1) << ',' << format_number(row.axis2) << ','
        << format_number(row.value) << '\n';
  }
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  emit_csv(result, file);
  file.flush();
  if (!file) throw IoError("failed writing '" + path + "'");
}

}  // namespace hostembed
