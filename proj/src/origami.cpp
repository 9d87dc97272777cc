#include "zdcover/origami.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace zdcover {

namespace {

std::vector<int> invert(const std::vector<int>& p) {
  std::vector<int> inv(p.size());
  for (size_t i = 0; i < p.size(); ++i) inv[p[i]] = int(i);
  return inv;
}

void check_permutation(const std::vector<int>& p, int n, const char* name) {
  if (int(p.size()) != n) throw non_permutation_error(std::string(name) + ": wrong length");
  std::vector<char> seen(n, 0);
  for (int v : p) {
    if (v < 0 || v >= n || seen[v]) throw non_permutation_error(std::string(name) + ": not a bijection");
    seen[v] = 1;
  }
}

}  // namespace

Origami::Origami(int n, std::vector<int> right_perm, std::vector<int> up_perm,
                 std::vector<IntVec> w_right, std::vector<IntVec> w_up, int d)
    : n_(n), d_(d), right_(std::move(right_perm)), up_(std::move(up_perm)),
      w_right_(std::move(w_right)), w_up_(std::move(w_up)) {
  if (n_ <= 0) throw non_permutation_error("n_squares must be positive");
  check_permutation(right_, n_, "right_perm");
  check_permutation(up_, n_, "up_perm");
  if (int(w_right_.size()) != n_ || int(w_up_.size()) != n_)
    throw dimension_mismatch_error("weight tables must have one entry per square");
  for (int i = 0; i < n_; ++i)
    if (w_right_[i].dim() != d_ || w_up_[i].dim() != d_)
      throw dimension_mismatch_error("weight vector has wrong cover rank");
  right_inv_ = invert(right_);
  up_inv_ = invert(up_);

  // Connectivity: orbit of square 0 under <right, up> must be everything.
  std::vector<char> seen(n_, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int t : {right_[s], up_[s], right_inv_[s], up_inv_[s]}) {
      if (!seen[t]) {
        seen[t] = 1;
        ++count;
        stack.push_back(t);
      }
    }
  }
  if (count != n_) throw disconnected_error("surface is not connected");
}

Origami staircase(int s) {
  if (s < 2) throw std::invalid_argument("staircase needs s >= 2");
  std::vector<int> right(s), up(s);
  for (int i = 0; i < s; ++i) {
    right[i] = (i + 1) % s;
    up[i] = i;
  }
  up[0] = s - 1;
  up[s - 1] = 0;
  std::vector<IntVec> wr(s, IntVec(1)), wu(s, IntVec(1));
  wu[0][0] = 1;
  wu[s - 1][0] = -1;
  return Origami(s, right, up, wr, wu, 1);
}

namespace {

// One 6x4 torus cell of the plus-shaped wind-tree (two plus obstacles per
// cell); folding the billiard gives four reflection copies of the free part.
constexpr int kCellW = 6;
constexpr int kCellH = 4;

bool cell_is_obstacle(int x, int y) {
  static const bool obst[kCellH][kCellW] = {
      // y = 0 .. 3, x = 0 .. 5
      {false, false, true, false, false, true},
      {false, true, true, true, false, false},
      {false, false, true, false, false, true},
      {true, false, false, false, true, true},
  };
  return obst[y][x];
}

}  // namespace

Origami windtree_plus() {
  // Free cells of the table, in scan order.
  std::vector<std::pair<int, int>> free_cells;
  std::vector<std::vector<int>> cell_rank(kCellH, std::vector<int>(kCellW, -1));
  for (int y = 0; y < kCellH; ++y)
    for (int x = 0; x < kCellW; ++x)
      if (!cell_is_obstacle(x, y)) {
        cell_rank[y][x] = int(free_cells.size());
        free_cells.push_back({x, y});
      }
  const int nf = int(free_cells.size());
  const int n = 4 * nf;
  // Square id = parity * nf + cell rank, parity = 2*ph + pv.  Copy (ph, pv)
  // carries the table mirrored ph times horizontally, pv times vertically.
  auto id = [&](int cell, int ph, int pv) { return (2 * ph + pv) * nf + cell; };

  std::vector<int> right(n), up(n);
  std::vector<IntVec> wr(n, IntVec(2)), wu(n, IntVec(2));
  for (int cell = 0; cell < nf; ++cell) {
    auto [x, y] = free_cells[cell];
    for (int ph = 0; ph < 2; ++ph)
      for (int pv = 0; pv < 2; ++pv) {
        int s = id(cell, ph, pv);
        // Rightward in the folded copy moves right (ph=0) or left (ph=1)
        // on the table; a wall bounce flips ph and stays put.
        int xr = ph == 0 ? (x + 1) % kCellW : (x + kCellW - 1) % kCellW;
        if (cell_is_obstacle(xr, y)) {
          right[s] = id(cell, 1 - ph, pv);
        } else {
          right[s] = id(cell_rank[y][xr], ph, pv);
          // Crossing the cell seam advances one plane cell.
          if (ph == 0 && x == kCellW - 1) wr[s] = IntVec{1, 0};
          if (ph == 1 && x == 0) wr[s] = IntVec{-1, 0};
        }
        int yu = pv == 0 ? (y + 1) % kCellH : (y + kCellH - 1) % kCellH;
        if (cell_is_obstacle(x, yu)) {
          up[s] = id(cell, ph, 1 - pv);
        } else {
          up[s] = id(cell_rank[yu][x], ph, pv);
          if (pv == 0 && y == kCellH - 1) wu[s] = IntVec{0, 1};
          if (pv == 1 && y == 0) wu[s] = IntVec{0, -1};
        }
      }
  }
  return Origami(n, right, up, wr, wu, 2);
}

std::vector<Cylinder> cylinders(const Origami& o, Axis direction) {
  const int n = o.n_squares();
  const bool horiz = direction == Axis::horizontal;
  auto flow_next = [&](int s) { return horiz ? o.right(s) : o.up(s); };
  auto trans_next = [&](int s) { return horiz ? o.up(s) : o.right(s); };

  // Decompose into cycles of the flow-wise permutation.
  std::vector<int> cycle_of(n, -1);
  std::vector<std::vector<int>> cycles;
  for (int i = 0; i < n; ++i) {
    if (cycle_of[i] >= 0) continue;
    std::vector<int> cyc;
    for (int s = i; cycle_of[s] < 0; s = flow_next(s)) {
      cycle_of[s] = int(cycles.size());
      cyc.push_back(s);
    }
    cycles.push_back(std::move(cyc));
  }

  // Two flow-wise cycles stack into one cylinder when the transverse step
  // intertwines them square by square (no cone point on the shared edge).
  const int m = int(cycles.size());
  std::vector<char> merges(m, 0);
  std::vector<int> next_cycle(m, -1);
  std::vector<char> has_below(m, 0);
  for (int c = 0; c < m; ++c) {
    bool ok = true;
    for (int s : cycles[c]) {
      int a = horiz ? o.up(o.right(s)) : o.right(o.up(s));
      int b = horiz ? o.right(o.up(s)) : o.up(o.right(s));
      if (a != b) {
        ok = false;
        break;
      }
    }
    merges[c] = ok;
    if (ok) {
      next_cycle[c] = cycle_of[trans_next(cycles[c][0])];
      has_below[next_cycle[c]] = 1;
    }
  }

  std::vector<char> used(m, 0);
  std::vector<Cylinder> result;
  auto build_chain = [&](int start) {
    Cylinder cyl;
    cyl.direction = direction;
    std::vector<int> col = cycles[start];
    int cur = start;
    while (true) {
      used[cur] = 1;
      cyl.columns.push_back(col);
      if (!merges[cur] || used[next_cycle[cur]]) break;
      std::vector<int> above;
      above.reserve(col.size());
      for (int s : col) above.push_back(trans_next(s));
      col = std::move(above);
      cur = next_cycle[cur];
    }
    cyl.width = int(cyl.columns[0].size());
    cyl.height = int(cyl.columns.size());
    cyl.modulus = Rational(cyl.width, cyl.height);
    result.push_back(std::move(cyl));
  };
  // Chains start at a boundary column; anything left over wraps around.
  for (int c = 0; c < m; ++c)
    if (!used[c] && !has_below[c]) build_chain(c);
  for (int c = 0; c < m; ++c)
    if (!used[c]) build_chain(c);
  std::sort(result.begin(), result.end(), [](const Cylinder& a, const Cylinder& b) {
    return a.columns[0][0] < b.columns[0][0];
  });
  return result;
}

StratumData stratum(const Origami& o) {
  const int n = o.n_squares();
  // Full 2*pi turn about the vertex at a square's lower-left corner maps
  // square i to up(right(up^-1(right^-1(i)))); cone angles are the cycle
  // lengths of that permutation.
  std::vector<int> turn(n);
  for (int i = 0; i < n; ++i) turn[i] = o.up(o.right(o.down(o.left(i))));

  StratumData sd;
  std::vector<char> seen(n, 0);
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int s = i; !seen[s]; s = turn[s]) {
      seen[s] = 1;
      ++len;
    }
    sd.cone_angles.push_back(len);
  }
  std::sort(sd.cone_angles.rbegin(), sd.cone_angles.rend());
  int excess = 0;  // sum (k - 1) = 2g - 2
  for (int k : sd.cone_angles) excess += k - 1;
  sd.genus = (excess + 2) / 2;
  if (excess % 2 != 0) throw std::logic_error("Gauss-Bonnet parity violated");
  return sd;
}

std::string to_surface_file(const Origami& o) {
  std::ostringstream out;
  out << "origami d=" << o.cover_rank() << " n=" << o.n_squares() << "\n";
  for (int i = 0; i < o.n_squares(); ++i) {
    out << i << " r=" << o.right(i) << " u=" << o.up(i)
        << " wr=" << o.weight_right(i).str() << " wu=" << o.weight_up(i).str() << "\n";
  }
  return out.str();
}

namespace {

IntVec parse_vec(const std::string& s, int d) {
  IntVec v(d);
  std::stringstream ss(s);
  std::string tok;
  int i = 0;
  while (std::getline(ss, tok, ',')) {
    if (i >= d) throw parse_error("weight vector too long: " + s);
    v[i++] = std::stoll(tok);
  }
  if (i != d) throw parse_error("weight vector too short: " + s);
  return v;
}

std::string expect_key(const std::string& tok, const std::string& key) {
  if (tok.rfind(key + "=", 0) != 0) throw parse_error("expected " + key + "=..., got " + tok);
  return tok.substr(key.size() + 1);
}

}  // namespace

Origami from_surface_file(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  in >> word;
  if (word != "origami") throw parse_error("surface file must start with 'origami'");
  in >> word;
  int d = std::stoi(expect_key(word, "d"));
  in >> word;
  int n = std::stoi(expect_key(word, "n"));
  if (n <= 0) throw parse_error("n must be positive");
  std::vector<int> right(n), up(n);
  std::vector<IntVec> wr(n), wu(n);
  for (int i = 0; i < n; ++i) {
    int idx;
    if (!(in >> idx)) throw parse_error("truncated surface file");
    if (idx < 0 || idx >= n) throw parse_error("square id out of range");
    in >> word;
    right[idx] = std::stoi(expect_key(word, "r"));
    in >> word;
    up[idx] = std::stoi(expect_key(word, "u"));
    in >> word;
    wr[idx] = parse_vec(expect_key(word, "wr"), d);
    in >> word;
    wu[idx] = parse_vec(expect_key(word, "wu"), d);
  }
  return Origami(n, right, up, wr, wu, d);
}

Origami load_surface_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw parse_error("cannot open surface file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return from_surface_file(ss.str());
}

}  // namespace zdcover
