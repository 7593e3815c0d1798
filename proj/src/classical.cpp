#include "omrl/classical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <sstream>

namespace omrl {

namespace {

double wrap01(double x) {
  double y = x - std::floor(x);
  return y >= 1.0 ? 0.0 : y;
}

int64_t ipow3(int e) {
  int64_t r = 1;
  while (e-- > 0) r *= 3;
  return r;
}

}  // namespace

double MapSpec::lyapunov() const {
  return kind == MapKind::baker ? std::log(3.0) : std::log(2.0 + std::sqrt(3.0));
}

double MapSpec::step_phase_offset() const {
  if (kind == MapKind::baker) return 0.0;
  // -arg(2 - i)/(4*pi): phase of 1/sqrt((a+d+i(b-c))/2) for C = [[2,1],[3,2]]
  return -std::atan2(-1.0, 2.0) / (4.0 * kPi);
}

BakerStepResult baker_step(PhasePoint x) {
  int eps = static_cast<int>(std::floor(3.0 * x.q));
  if (eps > 2) eps = 2;
  if (eps < 0) eps = 0;
  return {{wrap01(3.0 * x.q - eps), (x.p + eps) / 3.0}, eps};
}

PhasePoint baker_step_back(PhasePoint x) {
  int eps = static_cast<int>(std::floor(3.0 * x.p));
  if (eps > 2) eps = 2;
  if (eps < 0) eps = 0;
  return {(x.q + eps) / 3.0, wrap01(3.0 * x.p - eps)};
}

CatStepResult cat_step(PhasePoint x) {
  double qr = 2.0 * x.q + x.p;
  double pr = 3.0 * x.q + 2.0 * x.p;
  int m = static_cast<int>(std::floor(qr));
  int n = static_cast<int>(std::floor(pr));
  return {{qr - m, pr - n}, m, n};
}

PhasePoint cat_step_back(PhasePoint x) {
  // C^{-1} = [[2,-1],[-3,2]]
  return {wrap01(2.0 * x.q - x.p), wrap01(-3.0 * x.q + 2.0 * x.p)};
}

// ---------------------------------------------------------------------------
// Baker orbit enumeration: symbol strings over {0,1,2}, one aperiodic
// necklace representative per orbit. The periodic point of e_0..e_{L-1} is
// q0 = (sum_j e_j 3^{L-1-j})/(3^L - 1), p0 from the reversed string.

namespace {

bool is_fundamental(const std::vector<int>& s) {
  int L = static_cast<int>(s.size());
  for (int d = 1; d < L; ++d) {
    if (L % d != 0) continue;
    bool rep = true;
    for (int i = 0; i < L && rep; ++i) rep = s[i] == s[i % d];
    if (rep) return false;
  }
  return true;
}

bool is_necklace_rep(const std::vector<int>& s) {
  int L = static_cast<int>(s.size());
  std::vector<int> rot(L);
  for (int r = 1; r < L; ++r) {
    for (int i = 0; i < L; ++i) rot[i] = s[(i + r) % L];
    if (std::lexicographical_compare(rot.begin(), rot.end(), s.begin(), s.end()))
      return false;
  }
  return true;
}

}  // namespace

std::vector<PeriodicOrbit> enumerate_baker_orbits(int L_max, const OpeningStrip& strip) {
  std::vector<PeriodicOrbit> out;
  for (int L = 1; L <= L_max; ++L) {
    int64_t den = ipow3(L) - 1;
    std::vector<int> s(L, 0);
    int64_t total = ipow3(L);
    for (int64_t code = 0; code < total; ++code) {
      int64_t c = code;
      for (int i = L - 1; i >= 0; --i) {
        s[i] = static_cast<int>(c % 3);
        c /= 3;
      }
      if (!is_fundamental(s) || !is_necklace_rep(s)) continue;

      // exact rational orbit points; q advances by the shift map on the
      // symbol string, p lags one step behind with the reversed string
      std::vector<PhasePoint> pts(L);
      bool escapes = false;
      for (int j = 0; j < L && !escapes; ++j) {
        int64_t nq = 0, np = 0;
        for (int i = 0; i < L; ++i) {
          nq = nq * 3 + s[(j + i) % L];
          np = np * 3 + s[(j - 1 - i % L + 2 * L) % L];
        }
        // nq == den only for the all-2 string: the (1,1) corner, wrapped to (0,0)
        pts[j] = {static_cast<double>(nq % den) / den, static_cast<double>(np % den) / den};
        if (strip.contains(pts[j].q)) escapes = true;
      }
      if (escapes) continue;

      PeriodicOrbit orb;
      orb.kind = MapKind::baker;
      orb.period = L;
      orb.points = std::move(pts);
      std::ostringstream lab;
      for (int v : s) lab << v;
      orb.label = lab.str();
      // (1,1) == (0,0) on the torus: the all-2 string is the same geometric
      // fixed point as the all-0 string
      orb.corner_duplicate = L == 1 && s[0] == 2;
      out.push_back(std::move(orb));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cat orbit enumeration. Period-L points solve (C^L - I) x = m, m integer;
// they form the subgroup of (Q/Z)^2 generated by the columns of
// adj(C^L - I)/det(C^L - I).

namespace {

struct IMat2 {
  int64_t a, b, c, d;
  int64_t det() const { return a * d - b * c; }
};

IMat2 cat_power_minus_identity(int L) {
  IMat2 M{1, 0, 0, 1};
  for (int i = 0; i < L; ++i)
    M = IMat2{2 * M.a + M.c, 2 * M.b + M.d, 3 * M.a + 2 * M.c, 3 * M.b + 2 * M.d};
  M.a -= 1;
  M.d -= 1;
  return M;
}

int64_t imod(int64_t x, int64_t m) {
  int64_t r = x % m;
  return r < 0 ? r + m : r;
}

}  // namespace

std::vector<PeriodicOrbit> enumerate_cat_orbits(int L_max, const OpeningStrip& strip) {
  std::vector<PeriodicOrbit> out;
  std::set<std::pair<int64_t, int64_t>> seen;  // points as (a*Dmax/D, ...) — use per-L local sets

  // Track seen points across periods via exact rationals reduced to lowest
  // terms, since different L give different denominators.
  std::set<std::pair<int64_t, int64_t>> seen_reduced;  // (num_q<<32|den?) — store reduced pair
  auto reduced_key = [](int64_t num, int64_t den) {
    int64_t g = std::gcd(num, den);
    if (g == 0) g = 1;
    return std::pair<int64_t, int64_t>(num / g, den / g);
  };
  std::set<std::pair<std::pair<int64_t, int64_t>, std::pair<int64_t, int64_t>>> visited;

  for (int L = 1; L <= L_max; ++L) {
    IMat2 M = cat_power_minus_identity(L);
    int64_t D = std::llabs(M.det());
    // generators of the period-L lattice, numerators mod D over denominator D
    int64_t sgn = M.det() > 0 ? 1 : -1;
    std::pair<int64_t, int64_t> g1{imod(sgn * M.d, D), imod(-sgn * M.c, D)};
    std::pair<int64_t, int64_t> g2{imod(-sgn * M.b, D), imod(sgn * M.a, D)};

    std::set<std::pair<int64_t, int64_t>> pts;
    // order of g1 in (Z_D)^2
    int64_t gg = std::gcd(std::gcd(g1.first, g1.second), D);
    int64_t n1 = D / (gg == 0 ? D : gg);
    if (n1 == 0) n1 = 1;
    std::vector<std::pair<int64_t, int64_t>> base;
    base.reserve(n1);
    std::pair<int64_t, int64_t> cur{0, 0};
    for (int64_t i = 0; i < n1; ++i) {
      base.push_back(cur);
      cur = {imod(cur.first + g1.first, D), imod(cur.second + g1.second, D)};
    }
    std::pair<int64_t, int64_t> shift{0, 0};
    for (int64_t j = 0; static_cast<int64_t>(pts.size()) < D && j <= D; ++j) {
      for (const auto& b : base)
        pts.insert({imod(b.first + shift.first, D), imod(b.second + shift.second, D)});
      shift = {imod(shift.first + g2.first, D), imod(shift.second + g2.second, D)};
    }

    for (const auto& p0 : pts) {
      auto key0 = std::make_pair(reduced_key(p0.first, D), reduced_key(p0.second, D));
      if (visited.count(key0)) continue;

      // iterate the orbit exactly over numerators mod D
      std::vector<std::pair<int64_t, int64_t>> orb{p0};
      auto x = p0;
      int per = L;
      for (int t = 1; t <= L; ++t) {
        x = {imod(2 * x.first + x.second, D), imod(3 * x.first + 2 * x.second, D)};
        if (x == p0) {
          per = t;
          break;
        }
        orb.push_back(x);
      }
      if (per != L) continue;  // fundamental period divides L; handled at its own L

      bool escapes = false;
      for (const auto& y : orb) {
        visited.insert(std::make_pair(reduced_key(y.first, D), reduced_key(y.second, D)));
        if (strip.contains(static_cast<double>(y.first) / D)) escapes = true;
      }
      if (escapes) continue;

      PeriodicOrbit o;
      o.kind = MapKind::cat;
      o.period = L;
      o.points.reserve(L);
      for (const auto& y : orb)
        o.points.push_back({static_cast<double>(y.first) / D, static_cast<double>(y.second) / D});
      std::ostringstream lab;
      lab << orb[0].first << "/" << D << "," << orb[0].second << "/" << D;
      o.label = lab.str();
      out.push_back(std::move(o));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
    if (a.period != b.period) return a.period < b.period;
    return a.label < b.label;
  });
  return out;
}

// ---------------------------------------------------------------------------

double baker_generating_action(double q, double p_next, int branch) {
  return 3.0 * q * p_next - branch * (q + p_next);
}

double cat_generating_action(double q, double q_lift_next) {
  return q * q - q * q_lift_next + q_lift_next * q_lift_next;
}

void orbit_actions(PeriodicOrbit& orbit, const MapSpec& map) {
  if (orbit.kind != map.kind) throw InconsistentOrbit("orbit/map kind mismatch");
  int L = orbit.period;
  orbit.actions.assign(L, 0.0);
  double tol = 1e-12;
  for (int l = 0; l < L; ++l) {
    const PhasePoint& x = orbit.points[l];
    const PhasePoint& xn = orbit.points[(l + 1) % L];
    if (map.kind == MapKind::baker) {
      auto [next, eps] = baker_step(x);
      bool corner = orbit.corner_duplicate || (x.q == 0.0 && x.p == 0.0);
      if (!corner &&
          (std::abs(next.q - xn.q) > tol || std::abs(next.p - xn.p) > tol))
        throw InconsistentOrbit("baker orbit points do not close: " + orbit.label);
      // quantum phase action of one baker step: q' eps / 3
      int branch = orbit.label.empty() ? eps : orbit.label[l] - '0';
      double qn = orbit.corner_duplicate ? 1.0 : xn.q;
      orbit.actions[l] = qn * branch / 3.0;
    } else {
      auto step = cat_step(x);
      if (std::abs(step.next.q - xn.q) > tol || std::abs(step.next.p - xn.p) > tol)
        throw InconsistentOrbit("cat orbit points do not close: " + orbit.label);
      double q_lift = 2.0 * x.q + x.p;  // unfolded image position
      orbit.actions[l] = cat_generating_action(x.q, q_lift) - step.wind_p * q_lift;
    }
  }
  orbit.total_action = std::accumulate(orbit.actions.begin(), orbit.actions.end(), 0.0);
}

// ---------------------------------------------------------------------------

double box_counting_dimension(const MapSpec& map, const OpeningStrip& strip,
                              int horizon, const std::vector<int>& depths) {
  if (depths.size() < 3) throw InsufficientSamples("need at least 3 depths");
  const int base = map.kind == MapKind::baker ? 3 : 2;
  const int sub = 3;  // sub-samples per box side
  const double lam = map.lyapunov();

  auto survives = [&](double q, double p, int h) {
    PhasePoint x{q, p};
    for (int t = 0; t < h; ++t) {
      if (strip.contains(x.q)) return false;
      x = map.kind == MapKind::baker ? baker_step(x).next : cat_step(x).next;
    }
    x = {q, p};
    for (int t = 0; t < h; ++t) {
      if (strip.contains(x.q)) return false;
      x = map.kind == MapKind::baker ? baker_step_back(x) : cat_step_back(x);
    }
    return true;
  };

  std::vector<double> log_inv_size, log_count;
  for (int k : depths) {
    int64_t nb = 1;
    for (int i = 0; i < k; ++i) nb *= base;
    // a deeper box cannot certify survival beyond the time its own scale
    // resolves; cap the horizon accordingly
    int h = std::min<int>(horizon,
                          static_cast<int>(std::ceil(k * std::log(double(base)) / lam)) + 1);
    int64_t cnt = 0;
#pragma omp parallel for reduction(+ : cnt) schedule(dynamic)
    for (int64_t i = 0; i < nb; ++i) {
      for (int64_t j = 0; j < nb; ++j) {
        bool ok = false;
        for (int si = 0; si < sub && !ok; ++si)
          for (int sj = 0; sj < sub && !ok; ++sj)
            ok = survives((i + (si + 0.5) / sub) / nb, (j + (sj + 0.5) / sub) / nb, h);
        if (ok) ++cnt;
      }
    }
    if (cnt == 0) throw InsufficientSamples("no surviving boxes at depth " + std::to_string(k));
    log_inv_size.push_back(k * std::log(double(base)));
    log_count.push_back(std::log(double(cnt)));
  }

  // least-squares slope
  size_t n = log_inv_size.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += log_inv_size[i];
    sy += log_count[i];
    sxx += log_inv_size[i] * log_inv_size[i];
    sxy += log_inv_size[i] * log_count[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace omrl
