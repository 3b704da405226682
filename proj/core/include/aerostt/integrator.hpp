#pragma once

// Dormand-Prince 8(5,3) embedded Runge-Kutta integrator with Hairer's
// step-size control. Templated on the scalar so the same scheme serves double
// production runs and extended/quad precision reference integrations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "aerostt/errors.hpp"
#include "aerostt/scalar.hpp"

namespace aerostt {

struct IntegratorConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  /// Largest allowed step (time units of the integrated system); <= 0 means unbounded.
  double max_step = 0.0;
  /// Record every accepted step, not only the requested output times.
  bool dense_output = false;
  long max_steps = 2'000'000;

  void validate() const;
};

template <class T>
struct Dop853Tableau {
  T c[13];
  T a[13][12];
  T b[13];
  T e5[13];
  T bhh[3];

  Dop853Tableau() {
    auto P = [](const char* s) { return parse_constant<T>(s); };
    for (auto& row : a)
      for (auto& v : row) v = T(0);
    for (auto& v : b) v = T(0);
    for (auto& v : e5) v = T(0);
    c[0] = T(0);
    c[1] = P("0.526001519587677318785587544488e-01");
    c[2] = P("0.789002279381515978178381316732e-01");
    c[3] = P("0.118350341907227396726757197510e+00");
    c[4] = P("0.281649658092772603273242802490e+00");
    c[5] = P("0.333333333333333333333333333333333333e+00");
    c[6] = P("0.25e+00");
    c[7] = P("0.307692307692307692307692307692307692e+00");
    c[8] = P("0.651282051282051282051282051282051282e+00");
    c[9] = P("0.6e+00");
    c[10] = P("0.857142857142857142857142857142857143e+00");
    c[11] = T(1);
    c[12] = T(1);

    a[1][0] = P("5.26001519587677318785587544488e-2");
    a[2][0] = P("1.97250569845378994544595329183e-2");
    a[2][1] = P("5.91751709536136983633785987549e-2");
    a[3][0] = P("2.95875854768068491816892993775e-2");
    a[3][2] = P("8.87627564304205475450678981324e-2");
    a[4][0] = P("2.41365134159266685502369798665e-1");
    a[4][2] = P("-8.84549479328286085344864962717e-1");
    a[4][3] = P("9.24834003261792003115737966543e-1");
    a[5][0] = P("3.7037037037037037037037037037037037e-2");
    a[5][3] = P("1.70828608729473871279604482173e-1");
    a[5][4] = P("1.25467687566822425016691814123e-1");
    a[6][0] = P("3.7109375e-2");
    a[6][3] = P("1.70252211019544039314978060272e-1");
    a[6][4] = P("6.02165389804559606850219397283e-2");
    a[6][5] = P("-1.7578125e-2");
    a[7][0] = P("3.70920001185047927108779319836e-2");
    a[7][3] = P("1.70383925712239993810214054705e-1");
    a[7][4] = P("1.07262030446373284651809199168e-1");
    a[7][5] = P("-1.53194377486244017527936158236e-2");
    a[7][6] = P("8.27378916381402288758473766002e-3");
    a[8][0] = P("6.24110958716075717114429577812e-1");
    a[8][3] = P("-3.36089262944694129406857109825e0");
    a[8][4] = P("-8.68219346841726006818189891453e-1");
    a[8][5] = P("2.75920996994467083049415600797e1");
    a[8][6] = P("2.01540675504778934086186788979e1");
    a[8][7] = P("-4.34898841810699588477366255144e1");
    a[9][0] = P("4.77662536438264365890433908527e-1");
    a[9][3] = P("-2.48811461997166764192642586468e0");
    a[9][4] = P("-5.90290826836842996371446475743e-1");
    a[9][5] = P("2.12300514481811942347288949897e1");
    a[9][6] = P("1.52792336328824235832596922938e1");
    a[9][7] = P("-3.32882109689848629194453265587e1");
    a[9][8] = P("-2.03312017085086261358222928593e-2");
    a[10][0] = P("-9.3714243008598732571704021658e-1");
    a[10][3] = P("5.18637242884406370830023853209e0");
    a[10][4] = P("1.09143734899672957818500254654e0");
    a[10][5] = P("-8.14978701074692612513997267357e0");
    a[10][6] = P("-1.85200656599969598641566180701e1");
    a[10][7] = P("2.27394870993505042818970056734e1");
    a[10][8] = P("2.49360555267965238987089396762e0");
    a[10][9] = P("-3.0467644718982195003823669022e0");
    a[11][0] = P("2.27331014751653820792359768449e0");
    a[11][3] = P("-1.05344954667372501984066689879e1");
    a[11][4] = P("-2.00087205822486249909675718444e0");
    a[11][5] = P("-1.79589318631187989172765950534e1");
    a[11][6] = P("2.79488845294199600508499808837e1");
    a[11][7] = P("-2.85899827713502369474065508674e0");
    a[11][8] = P("-8.87285693353062954433549289258e0");
    a[11][9] = P("1.23605671757943030647266201528e1");
    a[11][10] = P("6.43392746015763530355970484046e-1");

    b[0] = P("5.42937341165687622380535766363e-2");
    b[5] = P("4.45031289275240888144113950566e0");
    b[6] = P("1.89151789931450038304281599044e0");
    b[7] = P("-5.8012039600105847814672114227e0");
    b[8] = P("3.1116436695781989440891606237e-1");
    b[9] = P("-1.52160949662516078556178806805e-1");
    b[10] = P("2.01365400804030348374776537501e-1");
    b[11] = P("4.47106157277725905176885569043e-2");

    bhh[0] = P("0.244094488188976377952755905512e+00");
    bhh[1] = P("0.733846688281611857341361741547e+00");
    bhh[2] = P("0.220588235294117647058823529412e-01");

    e5[0] = P("0.1312004499419488073250102996e-01");
    e5[5] = P("-0.1225156446376204440720569753e+01");
    e5[6] = P("-0.4957589496572501915214079952e+00");
    e5[7] = P("0.1664377182454986536961530415e+01");
    e5[8] = P("-0.3503288487499736816886487290e+00");
    e5[9] = P("0.3341791187130174790297318841e+00");
    e5[10] = P("0.8192320648511571246570742613e-01");
    e5[11] = P("-0.2235530786388629525884427845e-01");
  }
};

template <class T>
const Dop853Tableau<T>& dop853_tableau() {
  static const Dop853Tableau<T> tableau;
  return tableau;
}

/// Adaptive DOP853 stepping over a fixed-size state vector.
template <class T>
class Dop853 {
 public:
  using State = std::vector<T>;

  Dop853(std::size_t n, IntegratorConfig config) : n_(n), config_(config), k_(12, State(n)), ytmp_(n), ynew_(n) {
    config_.validate();
  }

  /// Advances y from t0 to t1 (t1 > t0 or t1 < t0). Calls step_observer(t, y)
  /// after every accepted step when supplied. Returns the number of accepted steps.
  template <class Rhs, class Observer>
  long integrate(Rhs&& f, T t0, T t1, State& y, Observer&& step_observer) {
    using std::abs;
    using std::max;
    using std::min;
    using std::pow;
    if (t1 == t0) return 0;
    const auto& tab = dop853_tableau<T>();
    const T dir = t1 > t0 ? T(1) : T(-1);
    const T span = abs(t1 - t0);
    const T max_step = config_.max_step > 0 ? min(T(config_.max_step), span) : span;
    T t = t0;
    f(t, y, k_[0]);
    T h = next_h_ > 0 ? min(next_h_, max_step) : initial_step(f, t, y, dir, max_step);
    long accepted = 0;
    long attempts = 0;
    bool last_rejected = false;
    const T eps = std::numeric_limits<double>::epsilon() * T(1e-4);

    while (dir * (t1 - t) > T(0)) {
      if (++attempts > config_.max_steps) throw IntegrationError("integrator: step budget exhausted", to_double(t));
      const T remaining = abs(t1 - t);
      bool final_step = false;
      if (h >= remaining * T(0.999999999)) {
        h = remaining;
        final_step = true;
      }
      if (h <= abs(t) * eps + std::numeric_limits<double>::min())
        throw IntegrationError("integrator: step size underflow", to_double(t));

      const T hs = dir * h;
      for (std::size_t s = 1; s < 12; ++s) {
        for (std::size_t i = 0; i < n_; ++i) {
          T acc(0);
          for (std::size_t j = 0; j < s; ++j)
            if (tab.a[s][j] != T(0)) acc += tab.a[s][j] * k_[j][i];
          ytmp_[i] = y[i] + hs * acc;
        }
        f(t + tab.c[s] * hs, ytmp_, k_[s]);
      }
      T err5(0), err3(0);
      for (std::size_t i = 0; i < n_; ++i) {
        T incr(0), e5(0);
        for (std::size_t j = 0; j < 12; ++j) {
          if (tab.b[j] != T(0)) incr += tab.b[j] * k_[j][i];
          if (tab.e5[j] != T(0)) e5 += tab.e5[j] * k_[j][i];
        }
        ynew_[i] = y[i] + hs * incr;
        const T e3 = incr - tab.bhh[0] * k_[0][i] - tab.bhh[1] * k_[8][i] - tab.bhh[2] * k_[11][i];
        const T sc = T(config_.abs_tol) + T(config_.rel_tol) * max(abs(y[i]), abs(ynew_[i]));
        err5 += (e5 / sc) * (e5 / sc);
        err3 += (e3 / sc) * (e3 / sc);
      }
      T deno = err5 + T(0.01) * err3;
      if (deno <= T(0)) deno = T(1);
      using std::sqrt;
      const T err = h * err5 * sqrt(T(1) / (T(static_cast<double>(n_)) * deno));

      if (err <= T(1)) {
        t = final_step ? t1 : t + hs;
        y.swap(ynew_);
        ++accepted;
        f(t, y, k_[0]);
        if (record_) steps_.push_back(h);
        step_observer(t, y);
        T fac = err > T(0) ? T(0.9) * pow(err, T(-0.125)) : T(6);
        fac = min(T(6), max(T(0.333), fac));
        if (last_rejected) fac = min(fac, T(1));
        if (!final_step) h = min(h * fac, max_step);
        else next_h_ = min(h * fac, max_step);
        last_rejected = false;
      } else {
        const T fac = max(T(0.333), T(0.9) * pow(err, T(-0.125)));
        h *= fac;
        last_rejected = true;
      }
    }
    return accepted;
  }

  template <class Rhs>
  long integrate(Rhs&& f, T t0, T t1, State& y) {
    return integrate(std::forward<Rhs>(f), t0, t1, y, [](const T&, const State&) {});
  }

  /// Takes the given step sizes without error control, ending exactly at t0 + sum(steps).
  template <class Rhs>
  void replay(Rhs&& f, T t0, std::span<const T> steps, State& y) {
    const auto& tab = dop853_tableau<T>();
    T t = t0;
    for (const T& h : steps) {
      f(t, y, k_[0]);
      for (std::size_t s = 1; s < 12; ++s) {
        for (std::size_t i = 0; i < n_; ++i) {
          T acc(0);
          for (std::size_t j = 0; j < s; ++j)
            if (tab.a[s][j] != T(0)) acc += tab.a[s][j] * k_[j][i];
          ytmp_[i] = y[i] + h * acc;
        }
        f(t + tab.c[s] * h, ytmp_, k_[s]);
      }
      for (std::size_t i = 0; i < n_; ++i) {
        T incr(0);
        for (std::size_t j = 0; j < 12; ++j)
          if (tab.b[j] != T(0)) incr += tab.b[j] * k_[j][i];
        y[i] += h * incr;
      }
      t += h;
    }
  }

  /// Starts recording accepted step sizes (signed by direction is left to the caller).
  void record_steps(bool on) {
    record_ = on;
    steps_.clear();
  }
  const std::vector<T>& recorded_steps() const { return steps_; }
  /// Forgets the step size carried over from the previous integrate() call.
  void reset_step() { next_h_ = T(0); }

 private:
  template <class Rhs>
  T initial_step(Rhs& f, T t, const State& y, T dir, T max_step) {
    using std::abs;
    using std::max;
    using std::min;
    using std::pow;
    using std::sqrt;
    // Hairer's starting-step heuristic, order 8.
    T dnf(0), dny(0);
    for (std::size_t i = 0; i < n_; ++i) {
      const T sk = T(config_.abs_tol) + T(config_.rel_tol) * abs(y[i]);
      dnf += (k_[0][i] / sk) * (k_[0][i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    T h = (dnf <= T(1e-10) || dny <= T(1e-10)) ? T(1e-6) : sqrt(dny / dnf) * T(0.01);
    h = min(h, max_step);
    for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + dir * h * k_[0][i];
    f(t + dir * h, ytmp_, k_[1]);
    T der2(0);
    for (std::size_t i = 0; i < n_; ++i) {
      const T sk = T(config_.abs_tol) + T(config_.rel_tol) * abs(y[i]);
      const T d = (k_[1][i] - k_[0][i]) / sk;
      der2 += d * d;
    }
    der2 = sqrt(der2) / h;
    const T der12 = max(abs(der2), sqrt(dnf));
    const T h1 = der12 <= T(1e-15) ? max(T(1e-6), abs(h) * T(1e-3)) : pow(T(0.01) / der12, T(0.125));
    return min(min(T(100) * abs(h), h1), max_step);
  }

  std::size_t n_;
  IntegratorConfig config_;
  std::vector<State> k_;
  State ytmp_;
  State ynew_;
  T next_h_{0};
  bool record_ = false;
  std::vector<T> steps_;
};

}  // namespace aerostt
