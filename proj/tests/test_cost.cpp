#include <doctest.h>

#include <cmath>

#include "fcmstop/cost.hpp"
#include "fcmstop/errors.hpp"

using namespace fcmstop;

TEST_CASE("cents rounding and formatting") {
  CHECK(Cents::from_amount(4.24).value() == 424);
  CHECK(Cents::from_amount(0.005).value() == 1);
  CHECK(Cents::from_amount(0.0049).value() == 0);
  CHECK(Cents::from_amount(-1.005).value() == -101);
  CHECK(Cents(6870297).to_string() == "68,702.97");
  CHECK(Cents(5).to_string() == "0.05");
  CHECK(Cents(-123456789).to_string() == "-1,234,567.89");
  CHECK(Cents(100000).to_string() == "1,000.00");
}

TEST_CASE("compute cost") {
  const PriceSheet m5{0.424, "USD"};
  CHECK(Cents::from_amount(compute_cost(m5, 10.0)).to_string() == "4.24");
  CHECK(compute_cost(m5, 0.0) == 0.0);
  const double saved = compute_cost(m5, 162035.31);
  CHECK(std::abs(saved - 68702.97) <= 0.01);
  CHECK(Cents::from_amount(saved).to_string() == "68,702.97");
  CHECK_THROWS_AS(compute_cost(m5, -1.0), InputError);
  CHECK_THROWS_AS(compute_cost({-0.1, "USD"}, 1.0), InputError);
}

TEST_CASE("total time and cost-effectiveness") {
  CHECK(total_time(1.786, 100.0) == doctest::Approx(101.786));
  CHECK(total_time(0.0, 7.5) == 7.5);
  CHECK(cost_effectiveness(29.33, 100.0) == doctest::Approx(0.2933));
  CHECK(cost_effectiveness(5.0, 5.0) == 1.0);
  CHECK(cost_effectiveness(0.0, 5.0) == 0.0);
  CHECK_THROWS_AS(cost_effectiveness(1.0, 0.0), InputError);
  CHECK_THROWS_AS(cost_effectiveness(2.0, 1.0), InputError);
}

TEST_CASE("cost report") {
  const auto r = make_cost_report({0.424, "USD"}, 1.0, 30.0, 100.0);
  CHECK(r.t_comp == 31.0);
  CHECK(r.cost_effective == doctest::Approx(0.3));
  CHECK(r.dollars_actual == Cents(1314));
  CHECK(r.dollars_full == Cents(4240));
  CHECK(r.dollars_saved == Cents(2968));
  CHECK(cost_report_summary(r).find("USD 29.68") != std::string::npos);
  CHECK(cost_report_to_json(r).find("\"dollars_saved\": \"29.68\"") != std::string::npos);
}

TEST_CASE("savings extrapolation") {
  const PriceSheet m5{0.424, "USD"};
  const auto ex = extrapolate_savings(423970.0, 16520.74, 162035.31 / 2.567e7, m5);
  CHECK(std::abs(static_cast<double>(ex.image_count) - 2.567e7) / 2.567e7 <= 1e-3);
  CHECK(ex.image_count == 25662895);
  CHECK(ex.saved_dollars == doctest::Approx(ex.saved_hours * 0.424));

  CHECK(extrapolate_savings(1.0, 1e6, 1.0, m5).image_count == 1);
  CHECK(extrapolate_savings(1.0, 3e5, 1.0, m5).image_count == 4);
  CHECK(kSquareMetersPerSquareKm == 1e6);
  CHECK_THROWS_AS(extrapolate_savings(0.0, 1.0, 1.0, m5), InputError);
  CHECK_THROWS_AS(extrapolate_savings(1.0, -1.0, 1.0, m5), InputError);
  CHECK_THROWS_AS(extrapolate_savings(1.0, 1.0, 0.0, m5), InputError);
}
