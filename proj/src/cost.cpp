#include "fcmstop/cost.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "fcmstop/errors.hpp"

namespace fcmstop {
namespace {

void require_finite_nonnegative(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) throw InputError(std::string(what) + " must be finite and >= 0");
}

}  // namespace

Cents Cents::from_amount(double amount) {
  if (!std::isfinite(amount)) throw InputError("currency amount is not finite");
  const double scaled = amount * 100.0;
  // Round half away from zero after discarding sub-nano-cent representation noise.
  const double cleaned = std::round(scaled * 1e6) / 1e6;
  return Cents(static_cast<std::int64_t>(cleaned >= 0.0 ? std::floor(cleaned + 0.5) : -std::floor(-cleaned + 0.5)));
}

std::string Cents::to_string() const {
  const std::int64_t abs_value = value_ < 0 ? -value_ : value_;
  std::string whole = std::to_string(abs_value / 100);
  for (int pos = static_cast<int>(whole.size()) - 3; pos > 0; pos -= 3) whole.insert(static_cast<std::size_t>(pos), ",");
  char frac[4];
  std::snprintf(frac, sizeof frac, "%02lld", static_cast<long long>(abs_value % 100));
  return (value_ < 0 ? "-" : "") + whole + "." + frac;
}

double compute_cost(const PriceSheet& price, double hours) {
  require_finite_nonnegative(price.unit_price, "unit price");
  require_finite_nonnegative(hours, "hours");
  return price.unit_price * hours;
}

double total_time(double t_train_hours, double t_actual_hours) {
  require_finite_nonnegative(t_train_hours, "training time");
  require_finite_nonnegative(t_actual_hours, "actual time");
  return t_train_hours + t_actual_hours;
}

double cost_effectiveness(double t_actual_hours, double t_total_hours) {
  if (!(t_total_hours > 0.0) || !std::isfinite(t_total_hours)) throw InputError("total time must be > 0");
  require_finite_nonnegative(t_actual_hours, "actual time");
  if (t_actual_hours > t_total_hours) throw InputError("actual time exceeds total time");
  return t_actual_hours / t_total_hours;
}

CostReport make_cost_report(const PriceSheet& price, double t_train_hours, double t_actual_hours, double t_total_hours) {
  CostReport report;
  report.currency = price.currency;
  report.t_train = t_train_hours;
  report.t_actual = t_actual_hours;
  report.t_total = t_total_hours;
  report.t_comp = total_time(t_train_hours, t_actual_hours);
  report.cost_effective = cost_effectiveness(t_actual_hours, t_total_hours);
  report.dollars_actual = Cents::from_amount(compute_cost(price, report.t_comp));
  report.dollars_full = Cents::from_amount(compute_cost(price, t_total_hours));
  report.dollars_saved = Cents::from_amount(compute_cost(price, t_total_hours - t_actual_hours));
  return report;
}

SavingsExtrapolation extrapolate_savings(double area_km2, double image_area_m2, double saved_hours_per_image,
                                         const PriceSheet& price) {
  if (!(area_km2 > 0.0) || !std::isfinite(area_km2)) throw InputError("area must be > 0");
  if (!(image_area_m2 > 0.0) || !std::isfinite(image_area_m2)) throw InputError("image footprint must be > 0");
  if (!(saved_hours_per_image > 0.0) || !std::isfinite(saved_hours_per_image)) {
    throw InputError("saved hours per image must be > 0");
  }
  if (!(price.unit_price > 0.0) || !std::isfinite(price.unit_price)) throw InputError("unit price must be > 0");

  SavingsExtrapolation out;
  const double images = area_km2 * kSquareMetersPerSquareKm / image_area_m2;
  // Exact multiples must not round up because of representation error.
  const double nearest = std::round(images);
  const double count = std::abs(images - nearest) <= 1e-9 * std::max(1.0, nearest) ? nearest : std::ceil(images);
  out.image_count = static_cast<std::uint64_t>(count);
  out.saved_hours = static_cast<double>(out.image_count) * saved_hours_per_image;
  out.saved_dollars = compute_cost(price, out.saved_hours);
  return out;
}

std::string cost_report_to_json(const CostReport& r) {
  const nlohmann::json doc = {{"currency", r.currency},
                              {"t_train_hours", r.t_train},
                              {"t_actual_hours", r.t_actual},
                              {"t_total_hours", r.t_total},
                              {"t_comp_hours", r.t_comp},
                              {"cost_effective", r.cost_effective},
                              {"dollars_actual", r.dollars_actual.to_string()},
                              {"dollars_full", r.dollars_full.to_string()},
                              {"dollars_saved", r.dollars_saved.to_string()}};
  return doc.dump(2) + "\n";
}

std::string cost_report_summary(const CostReport& r) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "training time      %14.6f h\n", r.t_train);
  out << line;
  std::snprintf(line, sizeof line, "early-stop time    %14.6f h\n", r.t_actual);
  out << line;
  std::snprintf(line, sizeof line, "full-run time      %14.6f h\n", r.t_total);
  out << line;
  std::snprintf(line, sizeof line, "cost-effectiveness %13.2f %%\n", 100.0 * r.cost_effective);
  out << line;
  out << "cost (train+stop)  " << r.currency << ' ' << r.dollars_actual.to_string() << '\n';
  out << "cost (full runs)   " << r.currency << ' ' << r.dollars_full.to_string() << '\n';
  out << "saved              " << r.currency << ' ' << r.dollars_saved.to_string() << '\n';
  return out.str();
}

}  // namespace fcmstop
