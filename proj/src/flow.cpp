#include "zdcover/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace zdcover {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Stepper {
  const Origami& o;
  double dx, dy;
  int square;
  double u, v;
  IntVec index;
  long long crossings = 0;

  Stepper(const Origami& oo, const CoverPoint& p, const Direction& dir, bool reverse)
      : o(oo), dx(reverse ? -dir.dx : dir.dx), dy(reverse ? -dir.dy : dir.dy),
        square(p.square), u(p.u), v(p.v), index(p.index) {}

  double time_to_x_edge() const {
    if (dx > 0) return (1.0 - u) / dx;
    if (dx < 0) return u / -dx;
    return kInf;
  }
  double time_to_y_edge() const {
    if (dy > 0) return (1.0 - v) / dy;
    if (dy < 0) return v / -dy;
    return kInf;
  }

  // Crosses the nearest edge; returns the time consumed.
  double cross() {
    double tx = time_to_x_edge();
    double ty = time_to_y_edge();
    double dt = std::min(tx, ty);
    u += dx * dt;
    v += dy * dt;
    if (tx <= ty) {
      if (v < kCornerBand || v > 1.0 - kCornerBand)
        throw singular_error("orbit passes a square corner");
      if (dx > 0) {
        index += o.weight_right(square);
        square = o.right(square);
        u = 0.0;
      } else {
        int s = o.left(square);
        index -= o.weight_right(s);
        square = s;
        u = 1.0;
      }
    } else {
      if (u < kCornerBand || u > 1.0 - kCornerBand)
        throw singular_error("orbit passes a square corner");
      if (dy > 0) {
        index += o.weight_up(square);
        square = o.up(square);
        v = 0.0;
      } else {
        int s = o.down(square);
        index -= o.weight_up(s);
        square = s;
        v = 1.0;
      }
    }
    ++crossings;
    return dt;
  }

  CoverPoint point() const { return CoverPoint{square, u, v, index}; }
};

}  // namespace

FlowResult flow(const Origami& o, const CoverPoint& p, const Direction& dir, double t) {
  Stepper st(o, p, dir, t < 0);
  double remaining = std::abs(t);
  while (true) {
    double next = std::min(st.time_to_x_edge(), st.time_to_y_edge());
    if (remaining <= next) {
      st.u += st.dx * remaining;
      st.v += st.dy * remaining;
      break;
    }
    remaining -= st.cross();
  }
  // Landing exactly on an edge is measure zero but must still produce
  // coordinates in [0,1).
  if (st.u >= 1.0) st.u = std::nextafter(1.0, 0.0);
  if (st.v >= 1.0) st.v = std::nextafter(1.0, 0.0);
  if (st.u < 0.0) st.u = 0.0;
  if (st.v < 0.0) st.v = 0.0;
  return FlowResult{st.point(), st.crossings};
}

Observable::Observable(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  for (int i = 0; i < int(pieces_.size()); ++i) {
    const Piece& pc = pieces_[i];
    auto key = std::make_pair(pc.square, pc.index);
    if (by_cell_.count(key)) throw std::invalid_argument("duplicate observable piece");
    by_cell_[key] = i;
    for (size_t j = 0; j < pc.coeffs.size(); ++j)
      for (size_t k = 0; k < pc.coeffs[j].size(); ++k)
        total_integral_ += pc.coeffs[j][k] / double((j + 1) * (k + 1));
  }
}

Observable Observable::fundamental_bump(const Origami& o) {
  std::vector<Piece> ps;
  for (int s = 0; s < o.n_squares(); ++s)
    ps.push_back(Piece{s, IntVec(o.cover_rank()), {{1.0}}});
  return Observable(std::move(ps));
}

Observable Observable::constant_on_cell(int square, const IntVec& index, double value) {
  return Observable({Piece{square, index, {{value}}}});
}

const Observable::Piece* Observable::find(int square, const IntVec& index) const {
  auto it = by_cell_.find(std::make_pair(square, index));
  return it == by_cell_.end() ? nullptr : &pieces_[it->second];
}

double Observable::eval(const CoverPoint& p) const {
  const Piece* pc = find(p.square, p.index);
  if (!pc) return 0.0;
  double s = 0.0;
  double uj = 1.0;
  for (size_t j = 0; j < pc->coeffs.size(); ++j) {
    double vk = 1.0;
    for (size_t k = 0; k < pc->coeffs[j].size(); ++k) {
      s += pc->coeffs[j][k] * uj * vk;
      vk *= p.v;
    }
    uj *= p.u;
  }
  return s;
}

double Observable::segment_integral(const Piece& piece, double u0, double v0, double dx,
                                    double dy, double len) {
  // Expand sum c_jk (u0 + dx t)^j (v0 + dy t)^k into a polynomial in t,
  // then integrate the closed form over [0, len].
  int deg = 0;
  for (size_t j = 0; j < piece.coeffs.size(); ++j)
    for (size_t k = 0; k < piece.coeffs[j].size(); ++k)
      if (piece.coeffs[j][k] != 0.0) deg = std::max(deg, int(j + k));
  std::vector<double> poly(deg + 1, 0.0);

  auto binom = [](int nn, int kk) {
    double r = 1.0;
    for (int i = 1; i <= kk; ++i) r = r * double(nn - kk + i) / double(i);
    return r;
  };
  for (size_t j = 0; j < piece.coeffs.size(); ++j) {
    for (size_t k = 0; k < piece.coeffs[j].size(); ++k) {
      double c = piece.coeffs[j][k];
      if (c == 0.0) continue;
      for (size_t a = 0; a <= j; ++a) {
        double fa = binom(int(j), int(a)) * std::pow(u0, double(j - a)) * std::pow(dx, double(a));
        for (size_t b = 0; b <= k; ++b) {
          double fb = binom(int(k), int(b)) * std::pow(v0, double(k - b)) * std::pow(dy, double(b));
          poly[a + b] += c * fa * fb;
        }
      }
    }
  }
  double integral = 0.0;
  double lp = len;
  for (int m = 0; m <= deg; ++m) {
    integral += poly[m] * lp / double(m + 1);
    lp *= len;
  }
  return integral;
}

double ergodic_integral(const Origami& o, const Observable& G, const CoverPoint& p,
                        const Direction& dir, double T) {
  if (!(T > 0)) throw std::invalid_argument("ergodic_integral needs T > 0");
  Stepper st(o, p, dir, false);
  double remaining = T;
  double sum = 0.0, comp = 0.0;  // Kahan accumulation
  auto add = [&](double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  while (remaining > 0) {
    double next = std::min(st.time_to_x_edge(), st.time_to_y_edge());
    double seg = std::min(next, remaining);
    const Observable::Piece* pc = G.find(st.square, st.index);
    if (pc) add(Observable::segment_integral(*pc, st.u, st.v, st.dx, st.dy, seg));
    if (remaining <= next) break;
    remaining -= st.cross();
  }
  return sum;
}

int SkewIET::interval_of(double x) const {
  auto it = std::upper_bound(break_points.begin(), break_points.end(), x);
  if (it == break_points.begin()) return int(break_points.size()) - 1;  // wrap
  return int(it - break_points.begin()) - 1;
}

namespace {

struct ReturnData {
  double image = 0.0;
  double translation = 0.0;
  IntVec label;
  long long crossings = 0;
  double time = 0.0;
};

ReturnData return_once(const Origami& o, int sq0, const Direction& dir, double u,
                       double max_time) {
  CoverPoint p{sq0, u, 0.0, IntVec(o.cover_rank())};
  Stepper st(o, p, dir, false);
  if (st.dy == 0.0) throw std::invalid_argument("transversal direction must not be horizontal");
  double elapsed = 0.0;
  bool first_event = true;
  while (elapsed < max_time) {
    int prev_square = st.square;
    double dt = st.cross();
    elapsed += dt;
    bool hit = false;
    if (st.dy > 0) {
      // entering sq0 across its bottom edge
      hit = (st.square == sq0 && st.v == 0.0);
    } else {
      // leaving sq0 across its bottom edge
      hit = (prev_square == sq0 && st.v == 1.0);
    }
    if (hit && !(first_event && elapsed == 0.0)) {
      double img = st.u;
      return ReturnData{img, img - u, st.index, st.crossings, elapsed};
    }
    first_event = false;
  }
  throw no_return_error("orbit did not return to the transversal in time");
}

bool same_branch(const ReturnData& a, const ReturnData& b) {
  return a.label == b.label && a.crossings == b.crossings &&
         std::abs(a.translation - b.translation) < 1e-9;
}

}  // namespace

SkewIET first_return(const Origami& o, int transversal_square, const Direction& dir,
                     const FirstReturnOptions& opts) {
  const int N = opts.initial_grid;
  std::vector<double> xs(N);
  std::vector<ReturnData> data(N);
  for (int i = 0; i < N; ++i) {
    double x = (i + 0.5) / N;
    // A sample hitting a corner is nudged; the break refinement below does
    // not depend on the exact sample position.
    for (int attempt = 0;; ++attempt) {
      try {
        data[i] = return_once(o, transversal_square, dir, x, opts.max_time);
        break;
      } catch (const singular_error&) {
        if (attempt > 20) throw;
        x += 3.7e-9;
      }
    }
    xs[i] = x;
  }

  auto refine = [&](double lo, double hi, const ReturnData& ref) {
    while (hi - lo > opts.refine_width) {
      double mid = 0.5 * (lo + hi);
      ReturnData rd;
      bool ok = false;
      double m = mid;
      for (int attempt = 0; attempt < 20 && !ok; ++attempt) {
        try {
          rd = return_once(o, transversal_square, dir, m, opts.max_time);
          ok = true;
        } catch (const singular_error&) {
          m = mid + (attempt + 1) * (hi - lo) * 1e-6;
        }
      }
      if (!ok) break;
      if (same_branch(rd, ref))
        lo = m;
      else
        hi = m;
    }
    return 0.5 * (lo + hi);
  };

  std::vector<double> breaks;
  for (int i = 0; i < N; ++i) {
    int j = (i + 1) % N;
    if (!same_branch(data[i], data[j])) {
      double lo = xs[i];
      double hi = xs[j] + (j == 0 ? 1.0 : 0.0);
      double b = refine(lo, hi, data[i]);
      if (b >= 1.0) b -= 1.0;
      breaks.push_back(b);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  if (breaks.empty()) breaks.push_back(0.0);

  SkewIET iet;
  iet.break_points = breaks;
  const int m = int(breaks.size());
  for (int i = 0; i < m; ++i) {
    double lo = breaks[i];
    double hi = i + 1 < m ? breaks[i + 1] : breaks[0] + 1.0;
    double mid = 0.5 * (lo + hi);
    if (mid >= 1.0) mid -= 1.0;
    ReturnData rd;
    for (int attempt = 0;; ++attempt) {
      try {
        rd = return_once(o, transversal_square, dir, mid, opts.max_time);
        break;
      } catch (const singular_error&) {
        if (attempt > 20) throw;
        mid += (hi - lo) * 1e-7;
      }
    }
    iet.translations.push_back(rd.translation);
    iet.labels.push_back(rd.label);
    iet.return_times.push_back(rd.time);
  }
  return iet;
}

std::string Observable::to_file() const {
  std::ostringstream out;
  out.precision(17);
  for (const Piece& pc : pieces_) {
    out << "square=" << pc.square << " index=" << pc.index.str() << " poly=";
    bool first = true;
    for (size_t j = 0; j < pc.coeffs.size(); ++j)
      for (size_t k = 0; k < pc.coeffs[j].size(); ++k) {
        if (pc.coeffs[j][k] == 0.0) continue;
        if (!first) out << " + ";
        out << pc.coeffs[j][k] << "*u^" << j << "*v^" << k;
        first = false;
      }
    if (first) out << "0*u^0*v^0";
    out << "\n";
  }
  return out.str();
}

Observable Observable::from_file(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Piece> pieces;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    Piece pc;
    ls >> tok;
    if (tok.rfind("square=", 0) != 0) throw parse_error("observable line must start with square=");
    pc.square = std::stoi(tok.substr(7));
    ls >> tok;
    if (tok.rfind("index=", 0) != 0) throw parse_error("expected index=");
    {
      std::string body = tok.substr(6);
      std::vector<long long> vals;
      std::stringstream vs(body);
      std::string num;
      while (std::getline(vs, num, ',')) vals.push_back(std::stoll(num));
      IntVec idx(int(vals.size()));
      for (size_t i = 0; i < vals.size(); ++i) idx[int(i)] = vals[i];
      pc.index = idx;
    }
    std::string rest;
    std::getline(ls, rest);
    auto pos = rest.find("poly=");
    if (pos == std::string::npos) throw parse_error("expected poly=");
    std::string poly = rest.substr(pos + 5);
    // terms of the form  c*u^j*v^k  joined by '+'
    std::stringstream ts(poly);
    std::string term;
    while (std::getline(ts, term, '+')) {
      double c = 1.0;
      int j = 0, k = 0;
      std::stringstream fs(term);
      std::string factor;
      bool saw_coeff = false;
      while (std::getline(fs, factor, '*')) {
        factor.erase(std::remove_if(factor.begin(), factor.end(), ::isspace), factor.end());
        if (factor.empty()) continue;
        if (factor[0] == 'u')
          j = factor.size() > 2 ? std::stoi(factor.substr(2)) : 1;
        else if (factor[0] == 'v')
          k = factor.size() > 2 ? std::stoi(factor.substr(2)) : 1;
        else {
          c = std::stod(factor);
          saw_coeff = true;
        }
      }
      if (!saw_coeff && term.find_first_not_of(" \t") == std::string::npos)
        throw parse_error("empty polynomial term");
      if (int(pc.coeffs.size()) <= j) pc.coeffs.resize(j + 1);
      if (int(pc.coeffs[j].size()) <= k) pc.coeffs[j].resize(k + 1, 0.0);
      pc.coeffs[j][k] += c;
    }
    pieces.push_back(std::move(pc));
  }
  return Observable(std::move(pieces));
}

}  // namespace zdcover
