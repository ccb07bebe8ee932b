#include "cot_atlas/crossover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "cot_atlas/error.hpp"

namespace cot_atlas {

DeltaCurve delta_cot(const CoTCurve& walk, const CoTCurve& slide) {
  DeltaCurve out;
  out.walk_speed = walk.speed;
  out.mu_s = slide.mu_s;

  std::vector<double> slopes;
  for (const auto& p : walk.points) slopes.push_back(p.alpha_deg);
  for (const auto& p : slide.points) slopes.push_back(p.alpha_deg);
  std::sort(slopes.begin(), slopes.end());
  slopes.erase(std::unique(slopes.begin(), slopes.end()), slopes.end());

  for (double a : slopes) {
    const CurvePoint* w = walk.at(a);
    const CurvePoint* s = slide.at(a);
    if (w && s && w->present && s->present) {
      out.points.push_back({a, s->mean - w->mean, std::hypot(w->std, s->std)});
    } else {
      out.dropped_slopes.push_back(a);
    }
  }
  if (out.points.size() < 2) {
    throw Error(ErrorKind::InsufficientOverlap,
                "walking and sliding curves share " + std::to_string(out.points.size()) +
                    " slope(s); need 2");
  }
  return out;
}

std::string_view crossover_class_name(CrossoverClass c) {
  switch (c) {
    case CrossoverClass::Crossings: return "crossings";
    case CrossoverClass::AlwaysSlidePreferred: return "always_slide_preferred";
    case CrossoverClass::AlwaysWalkPreferred: return "always_walk_preferred";
  }
  return "?";
}

double CrossoverResult::ordering_key() const {
  switch (classification) {
    case CrossoverClass::AlwaysSlidePreferred: return -std::numeric_limits<double>::infinity();
    case CrossoverClass::AlwaysWalkPreferred: return std::numeric_limits<double>::infinity();
    case CrossoverClass::Crossings: break;
  }
  return crossings.front().alpha_star;
}

CrossoverResult find_crossovers(const DeltaCurve& delta) {
  CrossoverResult out;
  out.walk_speed = delta.walk_speed;
  out.mu_s = delta.mu_s;
  const auto& p = delta.points;

  bool any_positive = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i].delta;
    if (d > 0.0) any_positive = true;
    if (d == 0.0) {
      if (i == 0 || p[i - 1].delta != 0.0) {
        out.crossings.push_back({p[i].alpha_deg, p[i].alpha_deg, p[i].alpha_deg});
      }
      continue;
    }
    if (i > 0 && p[i - 1].delta != 0.0 && (p[i - 1].delta > 0.0) != (d > 0.0)) {
      const double d1 = std::abs(p[i - 1].delta);
      const double span = p[i].alpha_deg - p[i - 1].alpha_deg;
      const double a = p[i - 1].alpha_deg + span * d1 / (d1 + std::abs(d));
      out.crossings.push_back({a, p[i - 1].alpha_deg, p[i].alpha_deg});
    }
  }

  if (!out.crossings.empty()) {
    out.classification = CrossoverClass::Crossings;
  } else {
    out.classification =
        any_positive ? CrossoverClass::AlwaysWalkPreferred : CrossoverClass::AlwaysSlidePreferred;
  }
  return out;
}

OrderingReport crossover_ordering_report(const std::vector<CrossoverResult>& results) {
  std::map<double, std::map<double, double>> speed_mu;  // v -> mu -> key
  std::map<double, std::map<double, double>> mu_speed;
  for (const auto& r : results) {
    speed_mu[r.walk_speed][r.mu_s] = r.ordering_key();
    mu_speed[r.mu_s][r.walk_speed] = r.ordering_key();
  }

  OrderingReport rep;
  for (const auto& [v, row] : speed_mu) {
    OrderingRow out{v, {row.begin(), row.end()}};
    for (std::size_t i = 1; i < out.keys.size(); ++i) {
      if (out.keys[i].second < out.keys[i - 1].second) rep.friction_monotone = false;
    }
    rep.by_speed.push_back(std::move(out));
  }
  for (const auto& [mu, row] : mu_speed) {
    OrderingRow out{mu, {row.begin(), row.end()}};
    for (std::size_t i = 1; i < out.keys.size(); ++i) {
      if (out.keys[i].second > out.keys[i - 1].second) rep.speed_anticipation = false;
    }
    rep.by_friction.push_back(std::move(out));
  }
  return rep;
}

std::vector<CrossoverResult> crossover_matrix(const std::vector<CoTCurve>& walk,
                                              const std::vector<CoTCurve>& slide) {
  std::vector<CrossoverResult> out;
  for (const auto& w : walk) {
    for (const auto& s : slide) out.push_back(find_crossovers(delta_cot(w, s)));
  }
  return out;
}

}  // namespace cot_atlas
