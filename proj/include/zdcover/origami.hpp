#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "zdcover/common.hpp"

namespace zdcover {

enum class Axis { horizontal, vertical };

// Square-tiled translation surface with Z^d cover decorations.
//
// Squares are unit squares labelled 0..n-1.  right_perm[i] is the square
// entered when leaving i through its right edge, up_perm[i] through its top
// edge.  w_right[i] / w_up[i] are the cover-index increments picked up on
// those crossings (negated when crossing the same edge the other way).
class Origami {
 public:
  Origami(int n, std::vector<int> right_perm, std::vector<int> up_perm,
          std::vector<IntVec> w_right, std::vector<IntVec> w_up, int d);

  int n_squares() const { return n_; }
  int cover_rank() const { return d_; }

  int right(int s) const { return right_[s]; }
  int up(int s) const { return up_[s]; }
  int left(int s) const { return right_inv_[s]; }
  int down(int s) const { return up_inv_[s]; }

  // Weight picked up when crossing square s's right/top edge in the
  // positive direction.
  const IntVec& weight_right(int s) const { return w_right_[s]; }
  const IntVec& weight_up(int s) const { return w_up_[s]; }

  const std::vector<int>& right_perm() const { return right_; }
  const std::vector<int>& up_perm() const { return up_; }

 private:
  int n_;
  int d_;
  std::vector<int> right_, up_, right_inv_, up_inv_;
  std::vector<IntVec> w_right_, w_up_;
};

// Maximal cylinder in a periodic (axis) direction.  Cycles of the flow-wise
// permutation with equal circumference stack into one cylinder; `columns`
// lists them in transverse order from the cylinder's own boundary, each
// column ordered along the flow.
struct Cylinder {
  Axis direction = Axis::horizontal;
  std::vector<std::vector<int>> columns;  // columns[t][l] = square id
  int width = 0;                          // circumference in flow direction
  int height = 0;                         // transverse extent = columns.size()
  Rational modulus;                       // width / height

  std::vector<int> squares() const {
    std::vector<int> all;
    for (const auto& c : columns) all.insert(all.end(), c.begin(), c.end());
    return all;
  }
};

struct StratumData {
  std::vector<int> cone_angles;  // angle at each vertex in multiples of 2*pi
  int genus = 0;
};

Origami staircase(int s);
Origami windtree_plus();

std::vector<Cylinder> cylinders(const Origami& o, Axis direction);
StratumData stratum(const Origami& o);

// Surface description file: header `origami d=<d> n=<n>`, then one line
// per square `<id> r=<right> u=<up> wr=<v1,..,vd> wu=<v1,..,vd>`.
std::string to_surface_file(const Origami& o);
Origami from_surface_file(const std::string& text);
Origami load_surface_file(const std::string& path);

}  // namespace zdcover
