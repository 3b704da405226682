#include "aerostt/qoi.hpp"

#include <stdexcept>

namespace aerostt {

const char* to_string(QoiKind k) { return k == QoiKind::Energy ? "energy" : "apoapsis"; }

QoiKind qoi_kind_from_string(const std::string& s) {
  if (s == "energy") return QoiKind::Energy;
  if (s == "apoapsis") return QoiKind::Apoapsis;
  throw std::invalid_argument("unknown quantity of interest: " + s);
}

QoiParameters make_qoi_parameters(const ModelSet& models, Units units, double capture_margin) {
  const Scales s = models.scales();
  QoiParameters q;
  q.j2 = models.planet.j2;
  if (units == Units::Nondimensional) {
    q.mu = 1.0;
    q.rp = 1.0;
    q.omega = models.planet.rotation_rate * s.time_ref;
    q.capture_margin = capture_margin;
  } else {
    q.mu = models.planet.mu;
    q.rp = models.planet.radius;
    q.omega = models.planet.rotation_rate;
    q.capture_margin = capture_margin * s.speed_ref * s.speed_ref;
  }
  return q;
}

double specific_energy(const StateVector& x, const ModelSet& models) {
  return specific_energy(x.x, make_qoi_parameters(models, x.units));
}

double apoapsis_radius(const StateVector& x, const ModelSet& models, double capture_margin) {
  return apoapsis_radius(x.x, make_qoi_parameters(models, x.units, capture_margin));
}

QoiPartials qoi_partials(const StateArray& x, QoiKind kind, int order, const QoiParameters& p) {
  if (order < 1 || order > 3) throw std::invalid_argument("qoi_partials: order must be 1..3");
  constexpr std::size_t n = kStateDim;
  constexpr const auto& L = kJetLayout<n>;
  const auto q = evaluate_qoi(kind, seed_jets(x), p);
  QoiPartials out;
  out.kind = to_string(kind);
  out.order = order;
  out.value = {q.v};
  out.eta1.reshape({1, n});
  for (std::size_t a = 0; a < n; ++a) out.eta1(0, a) = q.d1[a];
  if (order >= 2) {
    out.eta2.reshape({1, n, n});
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) out.eta2(0, a, b) = q.d2[L.pair[a][b]];
  }
  if (order >= 3) {
    out.eta3.reshape({1, n, n, n});
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) out.eta3(0, a, b, c) = q.d3[L.triple[a][b][c]];
  }
  return out;
}

QoiPartials qoi_partials(const StateVector& x, QoiKind kind, int order, const ModelSet& models,
                         double capture_margin) {
  return qoi_partials(x.x, kind, order, make_qoi_parameters(models, x.units, capture_margin));
}

QoiPartials identity_qoi(std::size_t n, int order) {
  QoiPartials out;
  out.kind = "identity";
  out.order = order;
  out.value.assign(n, 0.0);
  out.eta1 = identity_matrix<double>(n);
  if (order >= 2) out.eta2.reshape({n, n, n});
  if (order >= 3) out.eta3.reshape({n, n, n, n});
  return out;
}

}  // namespace aerostt
