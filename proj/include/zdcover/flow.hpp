#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "zdcover/origami.hpp"

namespace zdcover {

// Point of the Z^d-cover: square id, local coordinates in [0,1)^2, and
// the cover index (the xi coordinate; all squares at index 0 form the
// fundamental domain).
struct CoverPoint {
  int square = 0;
  double u = 0.0;
  double v = 0.0;
  IntVec index;
};

struct Direction {
  double dx = 0.0;
  double dy = 1.0;

  Direction() = default;
  Direction(double x, double y) {
    double r = std::hypot(x, y);
    if (!(r > 0)) throw std::invalid_argument("direction must be nonzero");
    dx = x / r;
    dy = y / r;
  }
};

struct FlowResult {
  CoverPoint point;
  long long crossings = 0;
};

// Half-width of the corner exclusion band: an orbit passing a square corner
// closer than this raises singular_error and the caller resamples.
inline constexpr double kCornerBand = 1e-12;

FlowResult flow(const Origami& o, const CoverPoint& p, const Direction& dir, double t);

// Compactly supported observable: one bivariate polynomial per
// (square, cover index) cell, exact integrals throughout.
class Observable {
 public:
  // coeffs[j][k] multiplies u^j v^k on the unit cell.
  struct Piece {
    int square = 0;
    IntVec index;
    std::vector<std::vector<double>> coeffs;
  };

  Observable() = default;
  explicit Observable(std::vector<Piece> pieces);

  // Indicator of the fundamental domain: 1 on every square at index 0.
  static Observable fundamental_bump(const Origami& o);
  static Observable constant_on_cell(int square, const IntVec& index, double value);

  bool empty() const { return pieces_.empty(); }
  const std::vector<Piece>& pieces() const { return pieces_; }
  // Plain Lebesgue integral over the cover (unit squares).
  double total_integral() const { return total_integral_; }

  const Piece* find(int square, const IntVec& index) const;

  double eval(const CoverPoint& p) const;
  // Exact integral of the piece polynomial along u(t) = u0 + dx t,
  // v(t) = v0 + dy t for t in [0, len], inside one cell.
  static double segment_integral(const Piece& piece, double u0, double v0, double dx,
                                 double dy, double len);

  std::string to_file() const;
  static Observable from_file(const std::string& text);

 private:
  std::vector<Piece> pieces_;
  std::map<std::pair<int, IntVec>, int> by_cell_;
  double total_integral_ = 0.0;
};

double ergodic_integral(const Origami& o, const Observable& G, const CoverPoint& p,
                        const Direction& dir, double T);

// First-return map of the flow to the bottom edge of one square, as an
// interval exchange with Z^d labels: T~(x, n) = (T(x), n + f(x)).
struct SkewIET {
  std::vector<double> break_points;     // sorted, in [0,1)
  std::vector<double> translations;     // per subinterval, T(x) = x + translations[i]
  std::vector<IntVec> labels;           // per subinterval, f value
  std::vector<double> return_times;     // per subinterval (diagnostic)

  int interval_of(double x) const;
};

struct FirstReturnOptions {
  double max_time = 1e5;       // beyond this, raise no_return_error
  int initial_grid = 2048;     // sampling resolution before bisection
  double refine_width = 1e-12; // bisection stops at this width
};

SkewIET first_return(const Origami& o, int transversal_square, const Direction& dir,
                     const FirstReturnOptions& opts = {});

}  // namespace zdcover
