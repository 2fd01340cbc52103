#include "linskol/random_gen.hpp"

#include <string>
#include <utility>
#include <vector>

namespace linskol {

namespace {

// Fixed atom pool; arities are part of the signature and never clash.
struct Pred {
  const char* name;
  int arity;
};
constexpr Pred kNeg[] = {{"a", 0}, {"b", 1}, {"c", 2}};
constexpr Pred kPos[] = {{"p", 0}, {"q", 1}, {"r", 2}};

class Gen {
 public:
  Gen(std::mt19937_64& rng, UidSource& uids, const GenOptions& opts)
      : rng_(rng), uids_(uids), opts_(opts) {}

  Sequent sequent() {
    bangs_ = opts_.max_bangs;
    if (chance(opts_.identity_bias)) {
      // delta { down N } |- N: provable by the identity theorem.
      reset_side();
      FormulaPtr n = neg();
      Sequent s;
      s.delta.push_back(mk_down(n));
      s.goal = n;
      return s;
    }
    Sequent s;
    const int items = 1 + static_cast<int>(pick(opts_.max_delta));
    for (int i = 0; i < items; ++i) {
      reset_side();
      s.delta.push_back(pos());
    }
    reset_side();
    s.goal = neg();
    return s;
  }

 private:
  bool chance(double p) {
    return (rng_() >> 11) * 0x1.0p-53 < p;  // uniform in [0,1)
  }
  size_t pick(size_t n) { return n ? rng_() % n : 0; }

  void reset_side() {
    connectives_ = opts_.max_connectives_per_side;
    quants_ = opts_.max_quantifiers_per_side;
  }

  bool spend_connective() {
    if (connectives_ <= 0) return false;
    --connectives_;
    return true;
  }

  TermPtr arg() {
    if (!scope_.empty() && !chance(0.25))
      return mk_var(scope_[pick(scope_.size())]);
    return mk_const("t0");
  }

  FormulaPtr atom_neg() {
    const Pred& p = kNeg[pick(std::size(kNeg))];
    std::vector<TermPtr> args;
    for (int i = 0; i < p.arity; ++i) args.push_back(arg());
    return mk_atom_neg(p.name, std::move(args));
  }

  FormulaPtr atom_pos() {
    const Pred& p = kPos[pick(std::size(kPos))];
    std::vector<TermPtr> args;
    for (int i = 0; i < p.arity; ++i) args.push_back(arg());
    return mk_atom_pos(p.name, std::move(args));
  }

  FormulaPtr neg() {
    if (spend_connective()) {
      switch (pick(4)) {
        case 0: {
          FormulaPtr p = pos();
          return mk_lolli(std::move(p), neg());
        }
        case 1:
          if (quants_ > 0) {
            --quants_;
            Var x = uids_.fresh_existential("x");
            scope_.push_back(x);
            FormulaPtr body = neg();
            scope_.pop_back();
            return mk_forall(x, std::move(body));
          }
          break;
        case 2:
          return mk_up(pos());
        default:
          break;
      }
    }
    return atom_neg();
  }

  FormulaPtr pos() {
    if (spend_connective()) {
      switch (pick(5)) {
        case 0: {
          FormulaPtr l = pos();
          return mk_tensor(std::move(l), pos());
        }
        case 1:
          if (quants_ > 0) {
            --quants_;
            Var x = uids_.fresh_existential("y");
            scope_.push_back(x);
            FormulaPtr body = pos();
            scope_.pop_back();
            return mk_exists(x, std::move(body));
          }
          break;
        case 2:
          if (bangs_ > 0) {
            --bangs_;
            return mk_bang(neg());
          }
          break;
        case 3:
          return mk_down(neg());
        default:
          break;
      }
    }
    return atom_pos();
  }

  std::mt19937_64& rng_;
  UidSource& uids_;
  const GenOptions& opts_;
  int connectives_ = 0;
  int quants_ = 0;
  int bangs_ = 0;
  std::vector<Var> scope_;
};

}  // namespace

Sequent random_sequent(std::mt19937_64& rng, UidSource& uids,
                       const GenOptions& opts) {
  return Gen(rng, uids, opts).sequent();
}

}  // namespace linskol
