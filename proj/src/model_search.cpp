// Bounded model search.
//
// Every term has depth one, so the value of a quantified term at an element only depends on
// the element's row for one binary atom.  Per binary atom and per unary type ("cell") a row
// is none / all / partial (partial needs two elements in the cell).  The search enumerates
// the set of present types, split into single-element and multi-element types, and
// computes the achievable rows symbolically.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "syllo/semantics.hpp"

namespace syllo {
namespace {

constexpr unsigned kAbsent = 1, kNone = 2, kAll = 4, kPartial = 8;

struct Ref {
  enum Kind : std::uint8_t { True, False, Bit } kind = True;
  int b = 0;
  int pos = 0;
  bool neg = false;
};

using Profile = std::vector<std::uint32_t>;

struct Clause {
  Ref lhs, rhs;  // lhs -> rhs
  int last_b;
};

struct Cover {
  Ref a, b;
  int last_b;
};

struct TypeInfo {
  int tau;
  std::vector<Clause> clauses;
  std::vector<std::vector<Cover>> covers;  // per existential; empty vector + flag below
  std::vector<bool> coverable;             // statically possible
};

struct Cell {
  int tau;
  unsigned opts;
};

struct Choice {
  std::uint32_t cover;
  Profile prof;
};

class Search {
 public:
  Search(const std::vector<Formula> &theta, int max_size) : theta_(theta), max_size_(max_size) {
    Signature sig = atoms(theta);
    un_.assign(sig.unaries.begin(), sig.unaries.end());
    bi_.assign(sig.binaries.begin(), sig.binaries.end());
    if (un_.size() > 16) throw std::invalid_argument("find_model: too many unary atoms");
    for (size_t i = 0; i < un_.size(); ++i) uidx_[un_[i]] = static_cast<int>(i);
    for (size_t i = 0; i < bi_.size(); ++i) bidx_[bi_[i]] = static_cast<int>(i);
    bits_.resize(bi_.size());
    for (const auto &f : theta) {
      (f.quantifier == Quantifier::All ? univ_ : exis_).push_back(f);
      for (const ETerm *e : {&f.left, &f.right}) register_term(*e);
    }
    if (exis_.size() > 20) throw std::invalid_argument("find_model: too many existential formulas");
    for (auto &bl : bits_)
      if (bl.size() > 20) throw std::invalid_argument("find_model: too many terms per binary atom");
    full_ = exis_.empty() ? 0u : ((1u << exis_.size()) - 1);
    // cell contributions
    const int ntypes = 1 << un_.size();
    xm_.assign(ntypes, Profile(bi_.size(), 0));
    ym_.assign(ntypes, Profile(bi_.size(), 0));
    for (int c = 0; c < ntypes; ++c)
      for (size_t b = 0; b < bi_.size(); ++b)
        for (size_t k = 0; k < bits_[b].size(); ++k) {
          const auto &[l, isx] = bits_[b][k];
          if (lit_true(c, l)) (isx ? xm_ : ym_)[c][b] |= 1u << k;
        }
  }

  ModelSearch run() {
    ModelSearch res;
    res.bound = max_size_;
    const int ntypes = 1 << un_.size();
    for (int t = 0; t < ntypes; ++t) {
      TypeInfo ti;
      if (build_type(t, ti)) {
        avail_.push_back(t);
        info_.emplace(t, std::move(ti));
      }
    }
    eliminate();
    if (avail_.empty()) return res;
    {
      // every existential needs a type that can witness it under the loosest assumptions
      std::vector<Cell> cells;
      for (int t : avail_) cells.push_back({t, kAbsent | kNone | kAll | kPartial});
      std::uint32_t u = 0;
      for (int t : avail_) {
        auto A = achievable_all(cells);
        u |= cover_union(info_.at(t), A);
      }
      if (u != full_) return res;
    }
    best_ = max_size_ + 1;
    dfs(0);
    if (best_ > max_size_) return res;
    res.model = realize();
    for (const auto &f : theta_)
      if (!satisfies(*res.model, f).holds)
        throw std::logic_error("find_model: constructed structure fails " + std::to_string(&f - &theta_[0]));
    return res;
  }

 private:
  const std::vector<Formula> &theta_;
  int max_size_;
  std::vector<std::string> un_, bi_;
  std::map<std::string, int> uidx_, bidx_;
  std::vector<std::vector<std::pair<UnaryLiteral, bool>>> bits_;  // per binary: (subject literal, is X)
  std::vector<Formula> univ_, exis_;
  std::uint32_t full_ = 0;
  std::vector<Profile> xm_, ym_;
  std::vector<int> avail_;
  std::map<int, TypeInfo> info_;

  // dfs state
  std::vector<std::pair<int, bool>> chosen_;
  int best_ = 0;
  std::vector<std::pair<int, bool>> best_support_;
  std::vector<std::pair<int, Profile>> best_elems_;

  bool lit_true(int tau, const UnaryLiteral &l) const {
    return ((tau >> uidx_.at(l.atom)) & 1) == (l.positive ? 1 : 0);
  }

  int bit_of(int b, const UnaryLiteral &l, bool isx) {
    auto &bl = bits_[b];
    for (size_t k = 0; k < bl.size(); ++k)
      if (bl[k].first == l && bl[k].second == isx) return static_cast<int>(k);
    bl.push_back({l, isx});
    return static_cast<int>(bl.size()) - 1;
  }

  void register_term(const ETerm &e) {
    if (e.is_literal()) return;
    int b = bidx_.at(e.verb.atom);
    bool x = (e.kind == TermKind::Exists) == e.verb.positive;
    bit_of(b, e.subject, x);
  }

  Ref eval(const ETerm &e, int tau) {
    Ref r;
    if (e.is_literal()) {
      r.kind = lit_true(tau, e.subject) ? Ref::True : Ref::False;
      return r;
    }
    r.kind = Ref::Bit;
    r.b = bidx_.at(e.verb.atom);
    bool x = (e.kind == TermKind::Exists) == e.verb.positive;
    r.pos = bit_of(r.b, e.subject, x);
    r.neg = e.kind == TermKind::Forall;  // forall reads the complement bit
    return r;
  }

  bool build_type(int tau, TypeInfo &ti) {
    ti.tau = tau;
    for (const auto &f : univ_) {
      Ref l = eval(f.left, tau), r = eval(f.right, tau);
      if (l.kind == Ref::False || r.kind == Ref::True) continue;
      if (l.kind == Ref::True && r.kind == Ref::False) return false;
      int last = std::max(l.kind == Ref::Bit ? l.b : -1, r.kind == Ref::Bit ? r.b : -1);
      ti.clauses.push_back({l, r, last});
    }
    ti.covers.resize(exis_.size());
    ti.coverable.assign(exis_.size(), true);
    for (size_t i = 0; i < exis_.size(); ++i) {
      Ref a = eval(exis_[i].left, tau), b = eval(exis_[i].right, tau);
      if (a.kind == Ref::False || b.kind == Ref::False) {
        ti.coverable[i] = false;
        continue;
      }
      int last = std::max(a.kind == Ref::Bit ? a.b : -1, b.kind == Ref::Bit ? b.b : -1);
      ti.covers[i].push_back({a, b, last});
    }
    return true;
  }

  static bool val(const Ref &r, const Profile &p) {
    if (r.kind == Ref::True) return true;
    if (r.kind == Ref::False) return false;
    return (((p[r.b] >> r.pos) & 1) != 0) != r.neg;
  }

  // achievable row masks for binary b
  std::vector<std::uint32_t> achievable(const std::vector<Cell> &cells, int b) const {
    const unsigned w = static_cast<unsigned>(bits_[b].size());
    std::vector<std::uint32_t> cur{0}, next;
    std::vector<char> seen(1u << w, 0);
    // cells with identical contributions: two copies already give every combination
    std::map<std::tuple<std::uint32_t, std::uint32_t, unsigned>, int> copies;
    for (const auto &c : cells) {
      const std::uint32_t x = xm_[c.tau][b], y = ym_[c.tau][b];
      int &n = copies[{x, y, c.opts}];
      if (n >= 2) continue;
      ++n;
      std::uint32_t contrib[4];
      int nc = 0;
      if (c.opts & kAbsent) contrib[nc++] = 0;
      if (c.opts & kNone) contrib[nc++] = y;
      if (c.opts & kAll) contrib[nc++] = x;
      if (c.opts & kPartial) contrib[nc++] = x | y;
      next.clear();
      for (auto m : cur)
        for (int s = 0; s < nc; ++s) {
          std::uint32_t nm = m | contrib[s];
          if (!seen[nm]) {
            seen[nm] = 1;
            next.push_back(nm);
          }
        }
      for (auto m : next) seen[m] = 0;
      cur.swap(next);
    }
    std::sort(cur.begin(), cur.end());
    return cur;
  }

  std::vector<std::vector<std::uint32_t>> achievable_all(const std::vector<Cell> &cells) const {
    std::vector<std::vector<std::uint32_t>> out;
    for (size_t b = 0; b < bi_.size(); ++b) out.push_back(achievable(cells, static_cast<int>(b)));
    return out;
  }

  // enumerate admissible profiles; cb returns false to stop
  template <class F>
  bool enumerate(const TypeInfo &ti, const std::vector<std::vector<std::uint32_t>> &A, F &&cb) const {
    Profile p(bi_.size(), 0);
    // clauses with no binary reference were settled in build_type
    return enum_rec(ti, A, p, 0, cb);
  }

  template <class F>
  bool enum_rec(const TypeInfo &ti, const std::vector<std::vector<std::uint32_t>> &A, Profile &p, size_t b,
                F &cb) const {
    if (b == bi_.size()) return cb(p);
    for (auto m : A[b]) {
      p[b] = m;
      bool ok = true;
      for (const auto &c : ti.clauses)
        if (c.last_b == static_cast<int>(b) && val(c.lhs, p) && !val(c.rhs, p)) {
          ok = false;
          break;
        }
      if (ok && !enum_rec(ti, A, p, b + 1, cb)) return false;
    }
    return true;
  }

  std::uint32_t cover_mask(const TypeInfo &ti, const Profile &p) const {
    std::uint32_t m = 0;
    for (size_t i = 0; i < exis_.size(); ++i) {
      if (!ti.coverable[i]) continue;
      const Cover &c = ti.covers[i][0];
      if (val(c.a, p) && val(c.b, p)) m |= 1u << i;
    }
    return m;
  }

  bool admissible(const TypeInfo &ti, const std::vector<std::vector<std::uint32_t>> &A) const {
    bool any = false;
    enumerate(ti, A, [&](const Profile &) {
      any = true;
      return false;
    });
    return any;
  }

  std::uint32_t cover_union(const TypeInfo &ti, const std::vector<std::vector<std::uint32_t>> &A) const {
    std::uint32_t u = 0, stat = 0;
    for (size_t i = 0; i < exis_.size(); ++i)
      if (ti.coverable[i]) stat |= 1u << i;
    if (stat == 0) return 0;
    enumerate(ti, A, [&](const Profile &p) {
      u |= cover_mask(ti, p);
      return u != stat;
    });
    return u;
  }

  // drop types that cannot be realised whatever else is present
  void eliminate() {
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<int> keep;
      for (int t : avail_) {
        std::vector<Cell> cells;
        for (int c : avail_) cells.push_back({c, c == t ? (kNone | kAll | kPartial) : (kAbsent | kNone | kAll | kPartial)});
        if (admissible(info_.at(t), achievable_all(cells)))
          keep.push_back(t);
        else
          changed = true;
      }
      avail_.swap(keep);
    }
  }

  std::vector<Cell> exact_cells(const std::vector<std::pair<int, bool>> &sup) const {
    std::vector<Cell> cells;
    for (auto [t, multi] : sup) cells.push_back({t, kNone | kAll | (multi ? kPartial : 0u)});
    return cells;
  }

  bool relaxed_ok(size_t next) const {
    std::vector<Cell> cells = exact_cells(chosen_);
    for (size_t j = next; j < avail_.size(); ++j) cells.push_back({avail_[j], kAbsent | kNone | kAll | kPartial});
    auto A = achievable_all(cells);
    for (auto [t, m] : chosen_)
      if (!admissible(info_.at(t), A)) return false;
    if (full_ == 0) return true;
    std::uint32_t u = 0;
    for (auto [t, m] : chosen_) {
      u |= cover_union(info_.at(t), A);
      if (u == full_) return true;
    }
    for (size_t j = next; j < avail_.size(); ++j) {
      u |= cover_union(info_.at(avail_[j]), A);
      if (u == full_) return true;
    }
    return false;
  }

  void dfs(size_t start) {
    if (!chosen_.empty()) evaluate();
    int base = 0;
    for (auto [t, m] : chosen_) base += m ? 2 : 1;
    for (size_t j = start; j < avail_.size(); ++j)
      for (bool multi : {false, true}) {
        if (base + (multi ? 2 : 1) >= best_) continue;
        chosen_.push_back({avail_[j], multi});
        if (relaxed_ok(j + 1)) dfs(j + 1);
        chosen_.pop_back();
      }
  }

  void evaluate() {
    auto A = achievable_all(exact_cells(chosen_));
    const size_t s = chosen_.size();
    std::vector<std::vector<Choice>> M(s);
    for (size_t i = 0; i < s; ++i) {
      const TypeInfo &ti = info_.at(chosen_[i].first);
      std::map<std::uint32_t, Profile> found;
      enumerate(ti, A, [&](const Profile &p) {
        found.try_emplace(cover_mask(ti, p), p);
        return !found.count(full_);
      });
      if (found.empty()) return;
      for (auto &[m, p] : found) {
        bool dominated = false;
        for (auto &[m2, p2] : found)
          if (m2 != m && (m2 | m) == m2) dominated = true;
        if (!dominated) M[i].push_back({m, p});
      }
    }
    // minimum number of elements covering every existential
    const std::uint32_t F = full_ + 1;
    constexpr int INF = 1 << 29;
    struct Back {
      std::uint32_t prev;
      int a, b;  // choice indices, b = -1 if single
    };
    std::vector<std::vector<int>> dp(s + 1, std::vector<int>(F, INF));
    std::vector<std::vector<Back>> back(s + 1, std::vector<Back>(F));
    dp[0][0] = 0;
    for (size_t i = 0; i < s; ++i) {
      const bool multi = chosen_[i].second;
      for (std::uint32_t m = 0; m < F; ++m) {
        if (dp[i][m] >= INF) continue;
        const auto &ch = M[i];
        for (size_t a = 0; a < ch.size(); ++a) {
          if (!multi) {
            std::uint32_t nm = m | ch[a].cover;
            if (dp[i][m] + 1 < dp[i + 1][nm]) {
              dp[i + 1][nm] = dp[i][m] + 1;
              back[i + 1][nm] = {m, static_cast<int>(a), -1};
            }
            continue;
          }
          for (size_t b = a; b < ch.size(); ++b) {
            std::uint32_t nm = m | ch[a].cover | ch[b].cover;
            if (dp[i][m] + 2 < dp[i + 1][nm]) {
              dp[i + 1][nm] = dp[i][m] + 2;
              back[i + 1][nm] = {m, static_cast<int>(a), static_cast<int>(b)};
            }
          }
        }
      }
    }
    // extra elements of multi types
    std::vector<int> fin = dp[s];
    struct Extra {
      std::uint32_t prev;
      int type_i, choice;
    };
    std::vector<Extra> eback(F, {0, -1, -1});
    for (std::uint32_t m = 0; m < F; ++m) {
      if (fin[m] >= INF) continue;
      for (size_t i = 0; i < s; ++i) {
        if (!chosen_[i].second) continue;
        for (size_t a = 0; a < M[i].size(); ++a) {
          std::uint32_t nm = m | M[i][a].cover;
          if (nm != m && fin[m] + 1 < fin[nm]) {
            fin[nm] = fin[m] + 1;
            eback[nm] = {m, static_cast<int>(i), static_cast<int>(a)};
          }
        }
      }
    }
    if (fin[full_] >= best_) return;
    best_ = fin[full_];
    best_support_ = chosen_;
    best_elems_.clear();
    std::uint32_t m = full_;
    std::vector<std::pair<int, Profile>> extras;
    while (eback[m].type_i >= 0) {
      const auto &e = eback[m];
      extras.push_back({chosen_[e.type_i].first, M[e.type_i][e.choice].prof});
      m = e.prev;
    }
    std::vector<std::vector<Profile>> per(s);
    for (size_t i = s; i > 0; --i) {
      const Back &bk = back[i][m];
      per[i - 1].push_back(M[i - 1][bk.a].prof);
      if (bk.b >= 0) per[i - 1].push_back(M[i - 1][bk.b].prof);
      m = bk.prev;
    }
    for (size_t i = 0; i < s; ++i)
      for (auto &p : per[i]) best_elems_.push_back({chosen_[i].first, p});
    for (auto &e : extras) best_elems_.push_back(e);
    std::stable_sort(best_elems_.begin(), best_elems_.end(),
                     [](const auto &x, const auto &y) { return x.first < y.first; });
  }

  // per-cell states realising target mask for binary b
  std::vector<unsigned> states_for(const std::vector<Cell> &cells, int b, std::uint32_t target) const {
    const unsigned w = static_cast<unsigned>(bits_[b].size());
    const size_t n = cells.size();
    std::vector<std::vector<char>> layer(n + 1, std::vector<char>(1u << w, 0));
    layer[0][0] = 1;
    auto contrib = [&](const Cell &c, unsigned st) -> std::uint32_t {
      const std::uint32_t x = xm_[c.tau][b], y = ym_[c.tau][b];
      switch (st) {
        case kNone: return y;
        case kAll: return x;
        case kPartial: return x | y;
        default: return 0;
      }
    };
    for (size_t i = 0; i < n; ++i)
      for (std::uint32_t m = 0; m < (1u << w); ++m) {
        if (!layer[i][m]) continue;
        for (unsigned st : {kNone, kAll, kPartial})
          if (cells[i].opts & st) layer[i + 1][m | contrib(cells[i], st)] = 1;
      }
    if (!layer[n][target]) throw std::logic_error("find_model: row not realisable");
    std::vector<unsigned> out(n);
    std::uint32_t m = target;
    for (size_t i = n; i > 0; --i) {
      bool done = false;
      for (unsigned st : {kNone, kAll, kPartial}) {
        if (!(cells[i - 1].opts & st)) continue;
        const std::uint32_t c = contrib(cells[i - 1], st);
        if ((m | c) != m) continue;
        // predecessor: any p with p | c == m
        for (std::uint32_t p = m;; p = (p - 1) & m) {
          if ((p | c) == m && layer[i - 1][p]) {
            out[i - 1] = st;
            m = p;
            done = true;
            break;
          }
          if (p == 0) break;
        }
        if (done) break;
      }
      if (!done) throw std::logic_error("find_model: reconstruction failed");
    }
    return out;
  }

  Structure realize() const {
    std::vector<std::string> dom;
    for (size_t i = 0; i < best_elems_.size(); ++i) dom.push_back("e" + std::to_string(i + 1));
    Structure A(dom);
    for (const auto &p : un_) A.declare_unary(p);
    for (const auto &r : bi_) A.declare_binary(r);
    std::map<int, std::vector<int>> members;
    for (size_t i = 0; i < best_elems_.size(); ++i) {
      int t = best_elems_[i].first;
      members[t].push_back(static_cast<int>(i));
      for (size_t a = 0; a < un_.size(); ++a)
        if ((t >> a) & 1) A.add_unary(un_[a], static_cast<int>(i));
    }
    auto cells = exact_cells(best_support_);
    for (size_t b = 0; b < bi_.size(); ++b)
      for (size_t i = 0; i < best_elems_.size(); ++i) {
        auto st = states_for(cells, static_cast<int>(b), best_elems_[i].second[b]);
        for (size_t c = 0; c < cells.size(); ++c) {
          const auto &mem = members.at(cells[c].tau);
          if (st[c] == kAll)
            for (int j : mem) A.add_binary(bi_[b], static_cast<int>(i), j);
          else if (st[c] == kPartial)
            A.add_binary(bi_[b], static_cast<int>(i), mem.front());
        }
      }
    return A;
  }
};

}  // namespace

ModelSearch find_model(const std::vector<Formula> &theta, int max_size) {
  if (max_size < 1) throw std::invalid_argument("find_model: bound must be positive");
  Search s(theta, max_size);
  return s.run();
}

}  // namespace syllo
