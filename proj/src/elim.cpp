#include "mutlin/elim.hpp"

#include <stdexcept>
#include <vector>

#include "mutlin/errors.hpp"

namespace mutlin {

Formula root_formula() {
  return Formula::conj(Formula::negation(Formula::modal(Modality::Up, Formula::top())),
                       Formula::negation(Formula::modal(Modality::Left, Formula::top())));
}

Formula c_k(Formula f, std::uint64_t k, std::uint64_t cap) {
  if (k > cap)
    throw std::invalid_argument("counting bound " + std::to_string(k) +
                                " above elimination cap " + std::to_string(cap));
  auto fv = free_vars(f);
  auto var_for = [&](std::uint64_t i) {
    std::string v = "c" + std::to_string(i);
    while (fv.count(v)) v += "_";
    return v;
  };
  auto dn = [](Formula g) { return Formula::modal(Modality::Down, g); };
  auto rt = [](Formula g) { return Formula::modal(Modality::Right, g); };

  std::vector<Formula> c;  // c[i] = C_i(f)
  for (std::uint64_t i = 0; i <= k; ++i) {
    std::string x = var_for(i);
    Formula vx = Formula::var(x);
    if (i == 0) {
      c.push_back(Formula::mu(x, Formula::disj(Formula::disj(f, dn(vx)), rt(vx))));
      continue;
    }
    // phi-case: f holds here and the subtrees carry the remaining i-1 plus
    // all splits k1+k2 = i-2 across both subtrees.
    Formula phi_case = Formula::disj(dn(c[i - 1]), rt(c[i - 1]));
    if (i >= 2)
      for (std::uint64_t k1 = 0; k1 + 2 <= i; ++k1)
        phi_case = Formula::disj(phi_case, Formula::conj(dn(c[k1]), rt(c[i - 2 - k1])));
    phi_case = Formula::conj(f, phi_case);
    // not-phi case: splits k1+k2 = i-1.
    Formula splits = Formula::conj(dn(c[0]), rt(c[i - 1]));
    for (std::uint64_t k1 = 1; k1 + 1 <= i; ++k1)
      splits = Formula::disj(splits, Formula::conj(dn(c[k1]), rt(c[i - 1 - k1])));
    Formula neg_case = Formula::conj(Formula::negation(f), splits);
    c.push_back(Formula::mu(
        x, Formula::disj(Formula::disj(Formula::disj(phi_case, neg_case), dn(vx)), rt(vx))));
  }
  return c[k];
}

namespace {
Formula count_gt_free(Formula body, std::uint64_t k, std::uint64_t cap) {
  // From any node, walk to the root and count there.
  auto fv = free_vars(body);
  std::string y = "w";
  while (fv.count(y)) y += "_";
  Formula vy = Formula::var(y);
  Formula at_root = Formula::conj(c_k(body, k, cap), root_formula());
  return Formula::mu(y, Formula::disj(Formula::disj(at_root, Formula::modal(Modality::Up, vy)),
                                      Formula::modal(Modality::Left, vy)));
}
}  // namespace

Formula eliminate_counting(Formula f, std::uint64_t cap) {
  switch (f.kind()) {
    case Kind::Prop:
    case Kind::Var:
    case Kind::True:
      return f;
    case Kind::Not:
      return Formula::negation(eliminate_counting(f.child(0), cap));
    case Kind::Or:
      return Formula::disj(eliminate_counting(f.child(0), cap),
                           eliminate_counting(f.child(1), cap));
    case Kind::And:
      return Formula::conj(eliminate_counting(f.child(0), cap),
                           eliminate_counting(f.child(1), cap));
    case Kind::Modal:
      return Formula::modal(f.modality(), eliminate_counting(f.child(0), cap));
    case Kind::Mu:
      return Formula::mu(f.name(), eliminate_counting(f.child(0), cap));
    case Kind::MuVec: {
      std::vector<Formula> kids;
      for (std::size_t i = 0; i + 1 < f.arity(); ++i)
        kids.push_back(eliminate_counting(f.child(i), cap));
      return Formula::mu_vec({f.vec_vars().begin(), f.vec_vars().end()}, std::move(kids),
                             eliminate_counting(f.child(f.arity() - 1), cap));
    }
    case Kind::CountGt:
      return count_gt_free(eliminate_counting(f.child(0), cap), f.bound(), cap);
    case Kind::CountLe:
      // <= is the dual: push the negation back into NNF form.
      return nnf(Formula::negation(count_gt_free(eliminate_counting(f.child(0), cap),
                                                 f.bound(), cap)));
  }
  __builtin_unreachable();
}

}  // namespace mutlin
