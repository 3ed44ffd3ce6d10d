#include "kbo/lia.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace kbo {

namespace {

// ---------------------------------------------------------------------------
// Number types for the simplex. Rat64 is a checked 64-bit rational that
// throws Overflow instead of wrapping; mpq_class is the exact fallback.

struct Overflow {};
struct NodeCapHit {};

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

struct Rat64 {
  std::int64_t n = 0;
  std::int64_t d = 1;

  Rat64() = default;
  Rat64(std::int64_t v) : n(v) {}  // NOLINT(implicit)

  static Rat64 make(i128 num, i128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    i128 g = gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    constexpr i128 lim = std::numeric_limits<std::int64_t>::max();
    if (num > lim || num < -lim || den > lim) throw Overflow{};
    Rat64 r;
    r.n = static_cast<std::int64_t>(num);
    r.d = static_cast<std::int64_t>(den);
    return r;
  }

  friend Rat64 operator+(const Rat64& a, const Rat64& b) {
    if (a.d == 1 && b.d == 1) return make(i128(a.n) + b.n, 1);
    return make(i128(a.n) * b.d + i128(b.n) * a.d, i128(a.d) * b.d);
  }
  friend Rat64 operator-(const Rat64& a, const Rat64& b) {
    if (a.d == 1 && b.d == 1) return make(i128(a.n) - b.n, 1);
    return make(i128(a.n) * b.d - i128(b.n) * a.d, i128(a.d) * b.d);
  }
  friend Rat64 operator*(const Rat64& a, const Rat64& b) {
    return make(i128(a.n) * b.n, i128(a.d) * b.d);
  }
  friend Rat64 operator/(const Rat64& a, const Rat64& b) {
    return make(i128(a.n) * b.d, i128(a.d) * b.n);
  }
  Rat64 operator-() const { return make(-i128(n), d); }
  Rat64& operator-=(const Rat64& o) { return *this = *this - o; }
  Rat64& operator/=(const Rat64& o) { return *this = *this / o; }

  friend bool operator==(const Rat64& a, const Rat64& b) { return a.n == b.n && a.d == b.d; }
  friend bool operator<(const Rat64& a, const Rat64& b) {
    return i128(a.n) * b.d < i128(b.n) * a.d;
  }
  friend bool operator>(const Rat64& a, const Rat64& b) { return b < a; }
  friend bool operator<=(const Rat64& a, const Rat64& b) { return !(b < a); }
  friend bool operator>=(const Rat64& a, const Rat64& b) { return !(a < b); }
};

bool is_integer(const Rat64& r) { return r.d == 1; }
Rat64 floor_of(const Rat64& r) {
  std::int64_t q = r.n / r.d;
  if (r.n % r.d != 0 && r.n < 0) --q;
  return Rat64(q);
}
bool sign_neg(const Rat64& r) { return r.n < 0; }
bool is_zero(const Rat64& r) { return r.n == 0; }
std::optional<std::int64_t> to_i64(const Rat64& r) {
  if (r.d != 1) return std::nullopt;
  return r.n;
}

bool is_integer(const mpq_class& r) { return r.get_den() == 1; }
mpq_class floor_of(const mpq_class& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return mpq_class(q);
}
bool sign_neg(const mpq_class& r) { return sgn(r) < 0; }
bool is_zero(const mpq_class& r) { return sgn(r) == 0; }
std::optional<std::int64_t> to_i64(const mpq_class& r) {
  if (r.get_den() != 1 || !r.get_num().fits_slong_p()) return std::nullopt;
  return r.get_num().get_si();
}

mpq_class from_mpz(const mpz_class& z, mpq_class*) { return mpq_class(z); }
Rat64 from_mpz(const mpz_class& z, Rat64*) {
  if (!z.fits_slong_p()) throw Overflow{};
  return Rat64(z.get_si());
}

template <class Num>
Num num_of(std::int64_t v) {
  return Num(static_cast<long>(v));
}

// ---------------------------------------------------------------------------
// Dense two-phase simplex with Bland's rule. Minimizes c.x subject to rows
// a.x (= or >=) b, x >= 0.

template <class Num>
struct LpRow {
  std::vector<Num> a;
  Num b;
  bool eq = false;
};

enum class LpStatus { Infeasible, Optimal, Unbounded };

template <class Num>
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Num> x;
  Num value;
};

template <class Num>
class Simplex {
 public:
  Simplex(std::size_t n, const std::vector<LpRow<Num>>& rows) : n_(n), m_(rows.size()) {
    std::size_t slacks = 0;
    for (const auto& r : rows) slacks += r.eq ? 0 : 1;
    art0_ = n_ + slacks;
    cols_ = art0_ + m_;
    T_.assign(m_, std::vector<Num>(cols_ + 1, Num(0)));
    basis_.resize(m_);
    allowed_.assign(cols_, true);
    std::size_t s = n_;
    for (std::size_t i = 0; i < m_; ++i) {
      auto& row = T_[i];
      for (std::size_t j = 0; j < n_; ++j) row[j] = rows[i].a[j];
      if (!rows[i].eq) row[s++] = Num(-1);
      row[cols_] = rows[i].b;
      if (sign_neg(row[cols_])) {
        for (auto& v : row) v = -v;
      }
      row[art0_ + i] = Num(1);
      basis_[i] = art0_ + i;
    }
  }

  // Phase one. False when infeasible.
  bool make_feasible() {
    d_.assign(cols_ + 1, Num(0));
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (j >= art0_ && j < cols_) continue;
        if (!is_zero(T_[i][j])) d_[j] -= T_[i][j];
      }
    }
    run();
    if (sign_neg(d_[cols_])) return false;  // -z < 0: some artificial is positive
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < art0_) continue;
      for (std::size_t j = 0; j < art0_; ++j) {
        if (!is_zero(T_[i][j])) {
          pivot(i, j);
          break;
        }
      }
    }
    for (std::size_t j = art0_; j < cols_; ++j) allowed_[j] = false;
    return true;
  }

  // Phase two on an already feasible tableau.
  LpStatus minimize(const std::vector<Num>& c) {
    d_.assign(cols_ + 1, Num(0));
    for (std::size_t j = 0; j < n_; ++j) d_[j] = c[j];
    for (std::size_t i = 0; i < m_; ++i) {
      std::size_t bj = basis_[i];
      if (bj >= n_ || is_zero(c[bj])) continue;
      Num cb = c[bj];
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (!is_zero(T_[i][j])) d_[j] -= cb * T_[i][j];
      }
    }
    return run() ? LpStatus::Optimal : LpStatus::Unbounded;
  }

  std::vector<Num> solution() const {
    std::vector<Num> x(n_, Num(0));
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = T_[i][cols_];
    }
    return x;
  }
  Num objective() const { return -d_[cols_]; }

 private:
  void pivot(std::size_t r, std::size_t c) {
    Num p = T_[r][c];
    for (auto& v : T_[r]) {
      if (!is_zero(v)) v /= p;
    }
    auto eliminate = [&](std::vector<Num>& row) {
      if (is_zero(row[c])) return;
      Num f = row[c];
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (!is_zero(T_[r][j])) row[j] -= f * T_[r][j];
      }
    };
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != r) eliminate(T_[i]);
    }
    eliminate(d_);
    basis_[r] = c;
  }

  // False when unbounded.
  bool run() {
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed_[j] && sign_neg(d_[j])) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return true;
      std::size_t leave = m_;
      Num best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (!(T_[i][enter] > Num(0))) continue;
        Num ratio = T_[i][cols_] / T_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  std::size_t n_, m_, art0_ = 0, cols_ = 0;
  std::vector<std::vector<Num>> T_;
  std::vector<Num> d_;
  std::vector<std::size_t> basis_;
  std::vector<bool> allowed_;
};

template <class Num>
LpResult<Num> solve_lp(std::size_t n, const std::vector<LpRow<Num>>& rows,
                       const std::vector<Num>* objective) {
  LpResult<Num> res;
  Simplex<Num> sx(n, rows);
  if (!sx.make_feasible()) return res;
  if (objective) {
    res.status = sx.minimize(*objective);
    if (res.status == LpStatus::Unbounded) return res;
    res.value = sx.objective();
  } else {
    res.status = LpStatus::Optimal;
    res.value = Num(0);
  }
  res.x = sx.solution();
  return res;
}

// ---------------------------------------------------------------------------
// Normalized integer rows: a.x (= or >=) b.

struct IntRow {
  std::vector<std::int64_t> a;
  std::int64_t b = 0;
  bool eq = false;
};

std::int64_t checked(i128 v) {
  constexpr i128 lim = std::numeric_limits<std::int64_t>::max();
  if (v > lim || v < -lim) {
    throw Error(ErrorCode::ResourceLimit, "coefficient overflow in linear system");
  }
  return static_cast<std::int64_t>(v);
}

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Divides by the coefficient gcd. Returns false for a row that is
// unsatisfiable on its own; sets `trivial` for rows with no variables that hold.
bool normalize(IntRow& r, bool& trivial) {
  trivial = false;
  std::int64_t g = 0;
  for (auto c : r.a) g = std::gcd(g, c);
  if (g == 0) {
    trivial = true;
    return r.eq ? r.b == 0 : r.b <= 0;
  }
  if (g == 1) return true;
  if (r.eq) {
    if (r.b % g != 0) return false;
    r.b /= g;
  } else {
    // a.x >= b with a divisible by g  <=>  (a/g).x >= ceil(b/g)
    r.b = checked(-floor_div(-i128(r.b), g));
  }
  for (auto& c : r.a) c /= g;
  return true;
}

struct Definition {
  std::size_t var;
  // var = b + a.x over the remaining variables.
  std::vector<std::int64_t> a;
  std::int64_t b = 0;
};

struct Prepared {
  std::vector<std::string> names;  // sorted originals, then helper columns
  std::size_t originals = 0;
  std::vector<IntRow> rows;
  std::vector<Definition> defs;    // in terms of the columns still live
  std::vector<bool> eliminated;
  std::vector<bool> free;          // helper columns range over all integers
  // Snapshot after the unit pivots: the small-solution bound is taken from
  // these rows and applies to the originals still live at that point.
  std::vector<IntRow> bound_rows;
  std::vector<bool> boxed;
  bool infeasible = false;
};

void substitute(std::vector<std::int64_t>& a, std::int64_t& b, bool rhs_side, const Definition& d) {
  std::int64_t c = a[d.var];
  if (c == 0) return;
  a[d.var] = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (d.a[k] != 0) a[k] = checked(i128(a[k]) + i128(c) * d.a[k]);
  }
  // For rows (a.x rel b) the constant moves to the right-hand side; for
  // definitions (v = b + a.x) it stays on the left.
  b = rhs_side ? checked(i128(b) - i128(c) * d.b) : checked(i128(b) + i128(c) * d.b);
}

// Replaces column d.var by its definition everywhere; a nonnegative column
// keeps its sign constraint as a row. Returns false on a contradiction.
bool eliminate(Prepared& p, Definition d) {
  for (auto& r : p.rows) substitute(r.a, r.b, true, d);
  for (auto& old : p.defs) substitute(old.a, old.b, false, d);
  // Keep x_j >= 0:  b + a.x >= 0  <=>  a.x >= -b
  if (!p.free[d.var]) p.rows.push_back(IntRow{d.a, checked(-i128(d.b)), false});
  p.eliminated[d.var] = true;
  p.defs.push_back(std::move(d));
  std::vector<IntRow> kept;
  for (auto& r : p.rows) {
    bool trivial = false;
    if (!normalize(r, trivial)) return false;
    if (!trivial) kept.push_back(std::move(r));
  }
  p.rows = std::move(kept);
  return true;
}

// Pivot equalities on unit-coefficient columns.
bool pivot_units(Prepared& p) {
  const std::size_t n = p.names.size();
  for (;;) {
    std::size_t ri = p.rows.size(), vj = n;
    for (std::size_t i = 0; i < p.rows.size() && ri == p.rows.size(); ++i) {
      if (!p.rows[i].eq) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (p.rows[i].a[j] == 1 || p.rows[i].a[j] == -1) {
          ri = i;
          vj = j;
          break;
        }
      }
    }
    if (ri == p.rows.size()) return true;
    IntRow row = p.rows[ri];
    p.rows.erase(p.rows.begin() + static_cast<std::ptrdiff_t>(ri));
    // a_j x_j + rest = b  =>  x_j = s*b - s*rest  with s = a_j = +-1
    const std::int64_t sgn = row.a[vj];
    Definition d{vj, std::vector<std::int64_t>(n, 0), sgn * row.b};
    for (std::size_t k = 0; k < n; ++k) {
      if (k != vj) d.a[k] = -sgn * row.a[k];
    }
    if (!eliminate(p, std::move(d))) return false;
  }
}

// a - m * round(a / m), halves rounded up.
std::int64_t mod_hat(std::int64_t a, std::int64_t m) {
  return checked(i128(a) - i128(m) * floor_div(2 * i128(a) + m, 2 * i128(m)));
}

// One step of the Omega test's equality elimination on a row without unit
// coefficients. With k the column of least |a_k| and m = |a_k| + 1, a fresh
// integer sigma satisfies
//   m*sigma = sum_j mod_hat(a_j, m) x_j - mod_hat(b, m)
// and since mod_hat(a_k, m) = -sign(a_k) this defines x_k. Substituting it
// back shrinks the row's coefficients by about a third.
bool reduce_equality(Prepared& p, const IntRow& row) {
  std::size_t k = p.names.size();
  for (std::size_t j = 0; j < row.a.size(); ++j) {
    if (row.a[j] != 0 && (k == p.names.size() || std::abs(row.a[j]) < std::abs(row.a[k]))) k = j;
  }
  const std::int64_t m = std::abs(row.a[k]) + 1;
  const std::int64_t sgn = row.a[k] > 0 ? 1 : -1;
  // New column for sigma.
  p.names.push_back("");
  for (auto& r : p.rows) r.a.push_back(0);
  for (auto& d : p.defs) d.a.push_back(0);
  for (auto* v : {&p.eliminated, &p.free}) v->push_back(false);
  p.free.back() = true;
  const std::size_t n = p.names.size();
  Definition d{k, std::vector<std::int64_t>(n, 0), checked(-i128(sgn) * mod_hat(row.b, m))};
  for (std::size_t j = 0; j < row.a.size(); ++j) {
    if (j != k) d.a[j] = sgn * mod_hat(row.a[j], m);
  }
  d.a[n - 1] = -sgn * m;
  return eliminate(p, std::move(d));
}

// With `integral`, every equality is eliminated (unit pivots, then Omega
// steps that add free helper columns). Without it only unit pivots run, which
// is all the rational relaxation needs.
Prepared prepare(const LinSystem& s, bool integral = true) {
  Prepared p;
  p.names = system_vars(s);
  p.originals = p.names.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < p.names.size(); ++i) index[p.names[i]] = i;
  const std::size_t n = p.names.size();
  p.eliminated.assign(n, false);
  p.free.assign(n, false);

  for (const auto& atom : s.atoms) {
    IntRow r;
    r.a.assign(n, 0);
    for (const auto& [v, c] : atom.left.coeffs) r.a[index[v]] = checked(i128(r.a[index[v]]) + c);
    for (const auto& [v, c] : atom.right.coeffs) r.a[index[v]] = checked(i128(r.a[index[v]]) - c);
    i128 rhs = i128(atom.right.constant) - atom.left.constant;
    if (atom.rel == LinRel::Gt) rhs += 1;
    r.b = checked(rhs);
    r.eq = atom.rel == LinRel::Eq;
    bool trivial = false;
    if (!normalize(r, trivial)) {
      p.infeasible = true;
      return p;
    }
    if (!trivial) p.rows.push_back(std::move(r));
  }

  if (!pivot_units(p)) {
    p.infeasible = true;
    return p;
  }
  p.bound_rows = p.rows;
  p.boxed.assign(n, false);
  for (std::size_t j = 0; j < n; ++j) p.boxed[j] = !p.eliminated[j];
  if (!integral) return p;
  for (;;) {
    auto it = std::find_if(p.rows.begin(), p.rows.end(), [](const IntRow& r) { return r.eq; });
    if (it == p.rows.end()) return p;
    const IntRow row = *it;
    if (!reduce_equality(p, row) || !pivot_units(p)) {
      p.infeasible = true;
      return p;
    }
  }
}

// Largest absolute value of a coefficient or right-hand side.
std::int64_t max_entry(const std::vector<IntRow>& rows) {
  std::int64_t a = 1;
  for (const auto& r : rows) {
    a = std::max<std::int64_t>(a, r.b < 0 ? -r.b : r.b);
    for (auto c : r.a) a = std::max<std::int64_t>(a, c < 0 ? -c : c);
  }
  return a;
}

// Small-solution bound for A y = b, y >= 0 integral with A of size m x n and
// entries (including b) at most a in absolute value: every vertex of the
// integer hull, hence some solution whenever one exists, has all entries at
// most n * (m * a)^(2m + 1) (Papadimitriou 1981). Inequalities count one
// slack column each.
mpz_class small_solution_bound(const std::vector<IntRow>& rows, std::size_t vars) {
  std::size_t m = rows.size();
  std::size_t n = vars;
  for (const auto& r : rows) n += r.eq ? 0 : 1;
  mpz_class base = mpz_class(static_cast<unsigned long>(std::max<std::size_t>(m, 1))) *
                   mpz_class(static_cast<long>(max_entry(rows)));
  mpz_class bound;
  mpz_pow_ui(bound.get_mpz_t(), base.get_mpz_t(), 2 * m + 1);
  return bound * static_cast<unsigned long>(std::max<std::size_t>(n, 1));
}

// ---------------------------------------------------------------------------
// Branch and bound over the remaining variables.

template <class Num>
class BranchBound {
 public:
  BranchBound(const Prepared& p, const std::optional<mpz_class>& box, std::size_t cap)
      : n_(p.names.size()), cap_(cap), free_(p.free) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (free_[j]) {
        split_.push_back(j);
        column_of_.push_back(n_ + split_.size() - 1);
      } else {
        column_of_.push_back(n_);
      }
    }
    for (const auto& r : p.rows) add_row(r.a, r.b, r.eq);
    lo_.assign(n_, std::nullopt);
    hi_.assign(n_, std::nullopt);
    active_.assign(n_, true);
    for (std::size_t j = 0; j < n_; ++j) active_[j] = !p.eliminated[j];
    if (box) {
      const Num b = from_mpz(*box, static_cast<Num*>(nullptr));
      for (std::size_t j = 0; j < p.originals; ++j) {
        if (!p.boxed[j]) continue;
        if (!p.eliminated[j]) {
          hi_[j] = b;
          continue;
        }
        // b_d + a.x <= box  <=>  -a.x >= b_d - box
        for (const auto& d : p.defs) {
          if (d.var != j) continue;
          LpRow<Num> row;
          for (auto c : d.a) row.a.push_back(num_of<Num>(-c));
          row.b = num_of<Num>(d.b) - b;
          base_.push_back(expand(std::move(row)));
        }
      }
    }
  }

  void add_equality(const std::vector<std::int64_t>& a, std::int64_t b) { add_row(a, b, true); }

  // Minimizes c.x over integer points (feasibility only when c is null).
  std::optional<std::vector<Num>> run(const std::vector<Num>* c) {
    best_.reset();
    nodes_ = 0;
    std::optional<std::vector<Num>> obj;
    if (c) obj = expand(LpRow<Num>{*c, Num(0), false}).a;
    objective_ = obj ? &*obj : nullptr;
    search();
    return best_;
  }

  const Num& best_value() const { return best_value_; }

 private:
  using Bounds = std::vector<std::optional<Num>>;

  // A free column j is x_j+ - x_j-; the minus part lives past n_.
  LpRow<Num> expand(LpRow<Num> row) const {
    for (auto j : split_) row.a.push_back(-row.a[j]);
    return row;
  }

  void add_row(const std::vector<std::int64_t>& a, std::int64_t b, bool eq) {
    LpRow<Num> row;
    row.a.reserve(n_ + split_.size());
    for (auto c : a) row.a.push_back(num_of<Num>(c));
    row.b = num_of<Num>(b);
    row.eq = eq;
    base_.push_back(expand(std::move(row)));
  }

  // Depth-first with an explicit stack of bound sets; the down branch is
  // explored first.
  void search() {
    std::vector<std::pair<Bounds, Bounds>> stack{{lo_, hi_}};
    const std::size_t width = n_ + split_.size();
    while (!stack.empty()) {
      auto [lo, hi] = std::move(stack.back());
      stack.pop_back();
      if (++nodes_ > cap_) throw NodeCapHit{};
      std::vector<LpRow<Num>> rows = base_;
      for (std::size_t j = 0; j < n_; ++j) {
        const Num one(1);
        auto bound = [&](const Num& sign, const Num& b) {
          LpRow<Num> r{std::vector<Num>(width, Num(0)), b, false};
          r.a[j] = sign;
          if (free_[j]) r.a[column_of_[j]] = -sign;
          rows.push_back(std::move(r));
        };
        if (lo[j]) bound(one, *lo[j]);
        if (hi[j]) bound(-one, -*hi[j]);
      }
      auto lp = solve_lp<Num>(width, rows, objective_);
      if (lp.status == LpStatus::Infeasible) continue;
      if (lp.status == LpStatus::Unbounded) {
        throw Error(ErrorCode::InvalidArgument, "linear objective unbounded below");
      }
      if (objective_ && best_) {
        // Integral objective: prune when even the rounded-up bound cannot improve.
        Num ceil_v = is_integer(lp.value) ? lp.value : floor_of(lp.value) + Num(1);
        if (ceil_v >= best_value_) continue;
      }
      std::vector<Num> x(lp.x.begin(), lp.x.begin() + static_cast<std::ptrdiff_t>(n_));
      for (std::size_t j = 0; j < n_; ++j) {
        if (free_[j]) x[j] -= lp.x[column_of_[j]];
      }
      std::size_t frac = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (active_[j] && !is_integer(x[j])) {
          frac = j;
          break;
        }
      }
      if (frac == n_) {
        best_ = std::move(x);
        best_value_ = lp.value;
        if (!objective_) return;
        continue;
      }
      const Num v = floor_of(x[frac]);
      Bounds up = lo;
      up[frac] = v + Num(1);
      stack.emplace_back(std::move(up), hi);
      hi[frac] = v;
      stack.emplace_back(std::move(lo), std::move(hi));
    }
  }

  std::size_t n_;
  std::size_t cap_;
  std::vector<bool> free_;
  std::vector<std::size_t> split_, column_of_;
  std::vector<LpRow<Num>> base_;
  Bounds lo_, hi_;
  std::vector<bool> active_;
  const std::vector<Num>* objective_ = nullptr;
  std::optional<std::vector<Num>> best_;
  Num best_value_;
  std::size_t nodes_ = 0;
};

// Objective "minimize variable i" over the remaining variables.
std::pair<std::vector<std::int64_t>, std::int64_t> objective_for(const Prepared& p, std::size_t i) {
  for (const auto& d : p.defs) {
    if (d.var == i) return {d.a, d.b};
  }
  std::vector<std::int64_t> a(p.names.size(), 0);
  a[i] = 1;
  return {a, 0};
}

template <class Num>
std::optional<Assignment> search_with(const Prepared& p, bool lexmin,
                                      std::optional<mpz_class> box, std::size_t cap) {
  const std::size_t n = p.names.size();
  BranchBound<Num> bb(p, box, cap);
  auto point = bb.run(nullptr);
  if (!point) return std::nullopt;
  if (lexmin) {
    for (std::size_t i = 0; i < p.originals; ++i) {
      auto [a, b] = objective_for(p, i);
      if (std::all_of(a.begin(), a.end(), [](std::int64_t c) { return c == 0; })) continue;
      std::vector<Num> c;
      for (auto v : a) c.push_back(num_of<Num>(v));
      point = bb.run(&c);
      if (!point) throw Error(ErrorCode::InvalidArgument, "lexmin lost feasibility");
      // Fix a.x at its minimum before moving to the next variable.
      auto m = to_i64(bb.best_value());
      if (!m) throw Error(ErrorCode::ResourceLimit, "witness does not fit in 64 bits");
      bb.add_equality(a, *m);
    }
  }
  Assignment out;
  std::vector<std::int64_t> x(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (p.eliminated[j]) continue;
    auto v = to_i64((*point)[j]);
    if (!v) throw Error(ErrorCode::ResourceLimit, "witness does not fit in 64 bits");
    x[j] = *v;
  }
  for (const auto& d : p.defs) {
    i128 v = d.b;
    for (std::size_t k = 0; k < n; ++k) v += i128(d.a[k]) * x[k];
    x[d.var] = checked(v);
  }
  for (std::size_t j = 0; j < p.originals; ++j) out[p.names[j]] = x[j];
  return out;
}

std::optional<Assignment> solve_impl(const LinSystem& s, bool lexmin, const LiaOptions& opts) {
  Prepared p = prepare(s);
  if (p.infeasible) return std::nullopt;
  try {
    return search_with<Rat64>(p, lexmin, std::nullopt, opts.fast_node_cap);
  } catch (const Overflow&) {
  } catch (const NodeCapHit&) {
  }
  const auto live = static_cast<std::size_t>(std::count(p.boxed.begin(), p.boxed.end(), true));
  mpz_class box = small_solution_bound(p.bound_rows, live);
  try {
    return search_with<mpq_class>(p, lexmin, box, opts.exact_node_cap);
  } catch (const NodeCapHit&) {
    throw Error(ErrorCode::ResourceLimit, "linear system search exceeded its node budget");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<std::string> system_vars(const LinSystem& s) {
  std::set<std::string> names(s.vars.begin(), s.vars.end());
  for (const auto& a : s.atoms) {
    for (const auto& [v, c] : a.left.coeffs) names.insert(v);
    for (const auto& [v, c] : a.right.coeffs) names.insert(v);
  }
  return {names.begin(), names.end()};
}

namespace {

i128 eval_lin(const LinExpr& e, const Assignment& a) {
  i128 v = e.constant;
  for (const auto& [name, c] : e.coeffs) {
    auto it = a.find(name);
    if (it == a.end()) throw Error(ErrorCode::InvalidArgument, "unassigned variable " + name);
    v += i128(c) * it->second;
  }
  return v;
}

bool eval_lin_atom(const LinAtom& atom, const Assignment& a) {
  i128 l = eval_lin(atom.left, a);
  i128 r = eval_lin(atom.right, a);
  switch (atom.rel) {
    case LinRel::Eq: return l == r;
    case LinRel::Gt: return l > r;
    case LinRel::Ge: return l >= r;
  }
  return false;
}

}  // namespace

bool satisfies(const LinSystem& s, const Assignment& a) {
  for (const auto& [name, v] : a) {
    if (v < 0) return false;
  }
  return std::all_of(s.atoms.begin(), s.atoms.end(),
                     [&](const LinAtom& atom) { return eval_lin_atom(atom, a); });
}

std::optional<Assignment> solve_system(const LinSystem& s, const LiaOptions& opts) {
  return solve_impl(s, true, opts);
}

bool feasible(const LinSystem& s, const LiaOptions& opts) {
  return solve_impl(s, false, opts).has_value();
}

bool relaxation_feasible(const LinSystem& s) {
  Prepared p = prepare(s, false);
  if (p.infeasible) return false;
  // Only live columns, and one row per left-hand side (the tightest bound).
  std::vector<std::size_t> live;
  for (std::size_t j = 0; j < p.names.size(); ++j) {
    if (std::any_of(p.rows.begin(), p.rows.end(), [&](const IntRow& r) { return r.a[j] != 0; })) live.push_back(j);
  }
  std::map<std::vector<std::int64_t>, std::int64_t> ge, eq;
  for (const auto& r : p.rows) {
    std::vector<std::int64_t> a;
    a.reserve(live.size());
    for (auto j : live) a.push_back(r.a[j]);
    if (r.eq) {
      auto [it, fresh] = eq.emplace(std::move(a), r.b);
      if (!fresh && it->second != r.b) return false;
    } else {
      auto [it, fresh] = ge.emplace(std::move(a), r.b);
      if (!fresh) it->second = std::max(it->second, r.b);
    }
  }
  const std::size_t n = live.size();
  auto rows_as = [&]<class Num>(Num*) {
    std::vector<LpRow<Num>> rows;
    auto add = [&](const auto& m, bool is_eq) {
      for (const auto& [a, b] : m) {
        LpRow<Num> row;
        for (auto c : a) row.a.push_back(num_of<Num>(c));
        row.b = num_of<Num>(b);
        row.eq = is_eq;
        rows.push_back(std::move(row));
      }
    };
    add(eq, true);
    add(ge, false);
    return rows;
  };
  try {
    return solve_lp<Rat64>(n, rows_as(static_cast<Rat64*>(nullptr)), nullptr).status !=
           LpStatus::Infeasible;
  } catch (const Overflow&) {
    return solve_lp<mpq_class>(n, rows_as(static_cast<mpq_class*>(nullptr)), nullptr).status !=
           LpStatus::Infeasible;
  }
}

// ---------------------------------------------------------------------------
// And/or trees

ArithFormula ArithFormula::atom(LinAtom a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->atom = std::move(a);
  return ArithFormula(std::move(n));
}

ArithFormula ArithFormula::conj(std::vector<ArithFormula> parts) {
  std::vector<ArithFormula> kept;
  for (auto& p : parts) {
    if (p.is_false()) return falsity();
    if (p.is_true()) continue;
    kept.push_back(std::move(p));
  }
  if (kept.size() == 1) return std::move(kept.front());
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->children = std::move(kept);
  return ArithFormula(std::move(n));
}

ArithFormula ArithFormula::disj(std::vector<ArithFormula> parts) {
  std::vector<ArithFormula> kept;
  for (auto& p : parts) {
    if (p.is_true()) return truth();
    if (p.is_false()) continue;
    kept.push_back(std::move(p));
  }
  if (kept.size() == 1) return std::move(kept.front());
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->children = std::move(kept);
  return ArithFormula(std::move(n));
}

bool evaluate(const ArithFormula& f, const Assignment& a) {
  switch (f.kind()) {
    case ArithFormula::Kind::Atom: return eval_lin_atom(f.as_atom(), a);
    case ArithFormula::Kind::And:
      return std::all_of(f.children().begin(), f.children().end(),
                         [&](const ArithFormula& c) { return evaluate(c, a); });
    case ArithFormula::Kind::Or:
      return std::any_of(f.children().begin(), f.children().end(),
                         [&](const ArithFormula& c) { return evaluate(c, a); });
  }
  return false;
}

namespace {

// Constant-only atoms are decided on the spot.
std::optional<bool> constant_truth(const LinAtom& a) {
  if (!a.left.is_constant() || !a.right.is_constant()) return std::nullopt;
  return eval_lin_atom(a, {});
}

struct Expander {
  const SystemVisitor& visit;
  LinSystem acc;

  bool go(std::vector<ArithFormula> work) {
    while (!work.empty()) {
      ArithFormula f = std::move(work.back());
      work.pop_back();
      switch (f.kind()) {
        case ArithFormula::Kind::Atom: {
          auto t = constant_truth(f.as_atom());
          if (t && !*t) return true;
          if (!t) acc.atoms.push_back(f.as_atom());
          if (t) break;
          bool cont = go(std::move(work));
          acc.atoms.pop_back();
          return cont;
        }
        case ArithFormula::Kind::And:
          for (auto it = f.children().rbegin(); it != f.children().rend(); ++it) work.push_back(*it);
          break;
        case ArithFormula::Kind::Or:
          for (const auto& c : f.children()) {
            auto next = work;
            next.push_back(c);
            if (!go(std::move(next))) return false;
          }
          return true;
      }
    }
    return visit(acc);
  }
};

}  // namespace

bool expand_to_systems(const ArithFormula& f, const LinSystem& base, const SystemVisitor& visit) {
  Expander e{visit, base};
  return e.go({f});
}

std::vector<LinSystem> expand_to_systems(const ArithFormula& f) {
  std::vector<LinSystem> out;
  expand_to_systems(f, LinSystem{}, [&](const LinSystem& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string print_lin(const LinExpr& e) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : e.coeffs) {
    if (c == 0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    Weight m = c < 0 ? -c : c;
    if (m != 1) os << m << "*";
    os << v;
    first = false;
  }
  if (first) {
    os << e.constant;
  } else if (e.constant != 0) {
    os << (e.constant < 0 ? " - " : " + ") << (e.constant < 0 ? -e.constant : e.constant);
  }
  return os.str();
}

}  // namespace

std::string print_lin_atom(const LinAtom& a) {
  const char* rel = a.rel == LinRel::Eq ? " = " : a.rel == LinRel::Gt ? " > " : " >= ";
  return print_lin(a.left) + rel + print_lin(a.right);
}

std::string print_system(const LinSystem& s) {
  if (s.atoms.empty()) return "true";
  std::string out;
  for (const auto& a : s.atoms) {
    if (!out.empty()) out += " & ";
    out += print_lin_atom(a);
  }
  return out;
}

std::string print_arith(const ArithFormula& f) {
  if (f.is_true()) return "true";
  if (f.is_false()) return "false";
  if (f.kind() == ArithFormula::Kind::Atom) return print_lin_atom(f.as_atom());
  const char* sep = f.kind() == ArithFormula::Kind::And ? " & " : " | ";
  std::string out;
  for (const auto& c : f.children()) {
    if (!out.empty()) out += sep;
    const bool wrap = c.kind() != ArithFormula::Kind::Atom && c.children().size() > 1;
    out += wrap ? "(" + print_arith(c) + ")" : print_arith(c);
  }
  return out;
}

LinExpr lin_var(const std::string& name, Weight coeff) {
  LinExpr e;
  if (coeff != 0) e.coeffs[name] = coeff;
  return e;
}

LinExpr lin_const(Weight c) { return LinExpr{c, {}}; }
LinAtom lin_eq(LinExpr l, LinExpr r) { return {std::move(l), LinRel::Eq, std::move(r)}; }
LinAtom lin_gt(LinExpr l, LinExpr r) { return {std::move(l), LinRel::Gt, std::move(r)}; }
LinAtom lin_ge(LinExpr l, LinExpr r) { return {std::move(l), LinRel::Ge, std::move(r)}; }

}  // namespace kbo
