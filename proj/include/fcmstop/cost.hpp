#pragma once

#include <cstdint>
#include <string>

namespace fcmstop {

/// On-demand price of the compute resource.
struct PriceSheet {
  double unit_price = 0.0;  ///< currency per hour
  std::string currency = "USD";
};

/// Whole cents; rounding from a currency amount is half-up.
class Cents {
 public:
  constexpr Cents() = default;
  constexpr explicit Cents(std::int64_t value) : value_(value) {}

  static Cents from_amount(double amount);

  constexpr std::int64_t value() const noexcept { return value_; }
  double amount() const noexcept { return static_cast<double>(value_) / 100.0; }
  /// "68,702.97"
  std::string to_string() const;

  friend constexpr bool operator==(Cents, Cents) = default;
  friend constexpr auto operator<=>(Cents, Cents) = default;

 private:
  std::int64_t value_ = 0;
};

/// Price * hours. Throws InputError for negative hours or price.
double compute_cost(const PriceSheet& price, double hours);

/// T_train + T_actual.
double total_time(double t_train_hours, double t_actual_hours);

/// T_actual / T_total; smaller means more of the full run was avoided.
double cost_effectiveness(double t_actual_hours, double t_total_hours);

struct CostReport {
  double t_train = 0.0;   ///< hours
  double t_actual = 0.0;  ///< hours, early-stopped clustering
  double t_total = 0.0;   ///< hours, clustering to full convergence
  double t_comp = 0.0;    ///< t_train + t_actual
  double cost_effective = 0.0;
  Cents dollars_actual;   ///< price * t_comp
  Cents dollars_full;     ///< price * t_total
  Cents dollars_saved;    ///< price * (t_total - t_actual)
  std::string currency = "USD";
};

CostReport make_cost_report(const PriceSheet& price, double t_train_hours, double t_actual_hours, double t_total_hours);

struct SavingsExtrapolation {
  std::uint64_t image_count = 0;
  double saved_hours = 0.0;
  double saved_dollars = 0.0;
};

inline constexpr double kSquareMetersPerSquareKm = 1e6;

/// Images needed to cover `area_km2` at `image_area_m2` each (ceiling), and
/// the hours and money saved at `saved_hours_per_image`.
SavingsExtrapolation extrapolate_savings(double area_km2, double image_area_m2, double saved_hours_per_image,
                                         const PriceSheet& price);

std::string cost_report_to_json(const CostReport& report);
std::string cost_report_summary(const CostReport& report);

}  // namespace fcmstop
