#include "qfb/pipeline.hpp"

#include <optional>

namespace qfb {

std::string branch_name(Branch b) {
  switch (b) {
    case Branch::GP3: return "GP3";
    case Branch::PfisterMultiple: return "pfister-multiple";
    case Branch::TransferNeeded: return "transfer-needed";
    case Branch::NotApplicable: return "not-applicable";
  }
  return "?";
}

namespace {

// Drops symbols that are split on their own.
BrauerClass2 compact(const BrauerClass2& c) {
  BrauerClass2 out(c.field, {});
  for (const auto& s : c.symbols)
    if (!is_trivial(BrauerClass2(c.field, {s}))) out.symbols.push_back(s);
  return out;
}

std::vector<Elem> support_seeds(const QuadraticForm& phi, const BrauerClass2& c) {
  std::vector<Elem> seeds = phi.entries();
  for (const auto& [a, b] : c.symbols) {
    seeds.push_back(a);
    seeds.push_back(b);
  }
  return seeds;
}

// phi = <<a>> q forces F(sqrt a) to split both phi and its Clifford invariant.
bool splits_over(const QuadraticForm& phi, const BrauerClass2& c, const Elem& a) {
  try {
    FieldPtr K = make_quad_ext(phi.field(), a).field;
    return is_trivial(c.restrict_to(K)) && is_hyperbolic(phi.base_change(K));
  } catch (const Error& e) {
    if (e.code() == Errc::UnsupportedTower) return true;  // undecided: let the extraction try
    throw;
  }
}

TransferPresentation split_route(const QuadraticForm& phi, const ClassificationReport& rep, const PipelineBounds& b) {
  const FieldPtr& F = phi.field();
  std::vector<Elem> cands;
  if (is_hyperbolic(phi)) cands.push_back(F->one());
  for (const auto& a : square_class_products(F, square_class_atoms(F, support_seeds(phi, rep.clifford)),
                                             b.max_pfister_slots))
    if (!is_square(a)) cands.push_back(a);
  const EtaleExtension E = EtaleExtension::split(F);
  for (const auto& a : cands) {
    if (!is_square(a) && !splits_over(phi, rep.clifford, a)) continue;
    QuadraticForm q;
    try {
      q = pfister_factor_extract(phi, a, b.witness);
    } catch (const Error& e) {
      if (e.code() == Errc::NotDivisible || e.code() == Errc::WitnessSearchExhausted) continue;
      throw;
    }
    // <<a>> q = <<a>><q0, q1> + <<a>><q2, q3>.
    QuadraticForm pi1(F, {q[0], q[1], -(a * q[0]), -(a * q[1])});
    QuadraticForm pi2(F, {q[2], q[3], -(a * q[2]), -(a * q[3])});
    TransferPresentation T{EtaleForm::of(E, pi1, pi2), {}, F->one(), {}};
    auto p1 = is_GP2(pi1), p2 = is_GP2(pi2);
    if (!p1 || !p2 || !is_isometric(transfer(T.psi), phi)) continue;
    T.gp2 = {*p1, *p2};
    T.route = "phi = <<" + a.str() + ">> q with q = " + q.str();
    return T;
  }
  throw Error(Errc::SearchExhausted, "no a with phi hyperbolic over F(sqrt a) among " + std::to_string(cands.size()) +
                                         " candidates");
}

// Distinct nontrivial quaternion classes (a, b) with slots among `classes`.
std::vector<BrauerClass2> quaternion_classes(const FieldPtr& K, const std::vector<Elem>& classes, bool dedup) {
  std::vector<BrauerClass2> out;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (std::size_t j = i; j < classes.size(); ++j) {
      if (is_square(classes[i]) || is_square(classes[j])) continue;
      BrauerClass2 Q(K, {{classes[i], classes[j]}});
      // Without dedup the caller filters by corestriction, which rejects split Q.
      if (dedup && is_trivial(Q)) continue;
      bool dup = false;
      for (std::size_t k = 0; dedup && k < out.size() && !dup; ++k) dup = same_class(Q, out[k]);
      if (!dup) out.push_back(Q);
    }
  }
  return out;
}

QuadraticForm norm_form(const BrauerClass2& Q) {
  return pfister(Q.field, {Q.symbols[0].first, Q.symbols[0].second});
}

// tr(psi) = c phi for some c in the searched classes: return the rescaled presentation.
std::optional<TransferPresentation> match(const QuadraticForm& phi, const EtaleForm& psi, const std::vector<Elem>& seeds) {
  Similarity sim = is_similar(transfer(psi), phi, seeds);
  if (!sim.similar) return std::nullopt;
  const Elem c_inv = sim.factor->inverse();
  TransferPresentation T{scale_by_base(psi, c_inv), {}, c_inv, {}};
  if (!is_isometric(transfer(T.psi), phi)) return std::nullopt;
  if (T.psi.ext.is_split()) {
    auto p1 = is_GP2(T.psi.component(0)), p2 = is_GP2(T.psi.component(1));
    if (!p1 || !p2) return std::nullopt;
    T.gp2 = {*p1, *p2};
  } else {
    auto p = is_GP2(T.psi.over_field());
    if (!p) return std::nullopt;
    T.gp2 = {*p};
  }
  return T;
}

TransferPresentation field_route(const QuadraticForm& phi, const ClassificationReport& rep, const PipelineBounds& b) {
  const FieldPtr& F = phi.field();
  const BrauerClass2& D = rep.clifford;
  const std::vector<Elem> seeds = support_seeds(phi, D);
  const std::vector<Elem> classes_F = square_class_products(F, square_class_atoms(F, seeds), b.max_quaternion_classes);
  std::size_t tried_e = 0, tried_q = 0, tried_s = 0;

  // L = F x F: psi = (n_Q1, r n_Q2) with Q1 + Q2 = D.
  if (b.allow_split) {
    ++tried_e;
    const EtaleExtension E = EtaleExtension::split(F);
    const std::vector<BrauerClass2> quats = quaternion_classes(F, classes_F, true);
    for (std::size_t i = 0; i < quats.size(); ++i) {
      for (std::size_t j = i; j < quats.size(); ++j) {
        if (!same_class(quats[i] + quats[j], D)) continue;
        ++tried_q;
        const QuadraticForm n1 = norm_form(quats[i]), n2 = norm_form(quats[j]);
        for (const auto& r : classes_F) {
          ++tried_s;
          if (auto T = match(phi, EtaleForm::of(E, n1, n2.scaled(r)), seeds)) {
            T->route = "L = F x F, Q1 = " + quats[i].str() + ", Q2 = " + quats[j].str() + ", r = " + r.str();
            return *T;
          }
        }
      }
    }
  }

  // L = F(sqrt d): psi = <s> n_Q with cor(Q) = D. Extensions over which D
  // drops to index <= 2 are tried first.
  std::vector<Elem> ds, later;
  for (const auto& d : square_class_products(F, square_class_atoms(F, seeds), b.max_extensions)) {
    if (is_square(d)) continue;
    const FieldPtr L = make_quad_ext(F, d).field;
    bool drops = false;
    try {
      drops = index(D.restrict_to(L)) <= 2;
    } catch (const Error& e) {
      if (e.code() != Errc::UnsupportedTower) throw;
    }
    (drops ? ds : later).push_back(d);
  }
  ds.insert(ds.end(), later.begin(), later.end());
  std::size_t unsupported = 0;
  for (const auto& d : ds) {
    ++tried_e;
    try {
    const EtaleExtension E = EtaleExtension::quadratic(F, d);
    const FieldPtr& L = E.field();
    std::vector<Elem> seeds_L;
    for (const auto& x : seeds) seeds_L.push_back(L->embed(x));
    seeds_L.push_back(L->gen());
    for (const auto& mu : small_elements(L, static_cast<std::size_t>(b.mu_height))) seeds_L.push_back(mu);
    const std::vector<Elem> classes = square_class_products(L, square_class_atoms(L, seeds_L), b.max_quaternion_classes);
    std::vector<Elem> scalars = classes;
    for (const auto& mu : small_elements(L, static_cast<std::size_t>(b.mu_height))) scalars.push_back(mu);
    if (scalars.size() > b.max_scalars) scalars.resize(b.max_scalars);
    std::vector<Elem> seeds_d = seeds;
    seeds_d.push_back(d);
    for (const auto& Q : quaternion_classes(L, classes, false)) {
      ++tried_q;
      if (!is_trivial(corestriction(EtaleBrauerClass{E, Q, {}}) + D)) continue;
      const QuadraticForm nQ = norm_form(Q);
      for (const auto& s : scalars) {
        ++tried_s;
        if (auto T = match(phi, EtaleForm::of(E, nQ.scaled(s)), seeds_d)) {
          T->route = "L = F(sqrt " + d.str() + "), Q = " + Q.str() + ", s = " + s.str();
          return *T;
        }
      }
    }
    } catch (const Error& e) {
      // Some decisions over this L leave the supported towers; move on.
      if (e.code() != Errc::UnsupportedTower) throw;
      ++unsupported;
    }
  }
  throw Error(Errc::SearchExhausted, "transfer search exhausted after " + std::to_string(tried_e) + " extensions, " +
                                         std::to_string(tried_q) + " quaternion classes, " + std::to_string(tried_s) +
                                         " scalars (" + std::to_string(unsupported) +
                                         " extensions unsupported)");
}

}  // namespace

ClassificationReport classify(const QuadraticForm& phi) {
  ClassificationReport r;
  r.dim = phi.dim();
  if (r.dim != 8) {
    r.note = "dimension " + std::to_string(r.dim) + ", expected 8";
    return r;
  }
  r.signed_discriminant = square_class(signed_discriminant_elem(phi)).rep;
  r.discriminant_trivial = has_trivial_discriminant(phi);
  if (!r.discriminant_trivial) {
    r.note = "signed discriminant " + r.signed_discriminant.str() + " is not trivial";
    return r;
  }
  r.clifford = compact(clifford_invariant(phi));
  r.index = index(r.clifford);
  switch (r.index) {
    case 1: r.branch = Branch::GP3; break;
    case 2: r.branch = Branch::PfisterMultiple; break;
    case 4: r.branch = Branch::TransferNeeded; break;
    default: r.note = "Clifford invariant of index " + std::to_string(r.index); break;
  }
  return r;
}

TransferPresentation construct_presentation(const QuadraticForm& phi, const PipelineBounds& b) {
  const ClassificationReport rep = classify(phi);
  switch (rep.branch) {
    case Branch::GP3:
    case Branch::PfisterMultiple: return split_route(phi, rep, b);
    case Branch::TransferNeeded: return field_route(phi, rep, b);
    case Branch::NotApplicable: break;
  }
  throw Error(Errc::PreconditionViolated, "not applicable: " + rep.note);
}

PresentationCheck verify_presentation(const QuadraticForm& phi, const TransferPresentation& T) {
  PresentationCheck out;
  auto& why = out.reasons;
  if (!T.psi.ext.base()->same_as(*phi.field())) why.push_back("psi lives over an extension of another field");
  if (!is_GP2(T.psi)) why.push_back("not GP2");
  if (why.empty()) {
    try {
      QuadraticForm t = transfer(T.psi);
      if (!is_isometric(t, phi)) why.push_back("transfer " + t.str() + " is not isometric to phi");
    } catch (const Error& e) {
      why.push_back(std::string("transfer failed: ") + e.what());
    }
  }
  if (phi.dim() % 2 || !has_trivial_discriminant(phi)) {
    why.push_back("signed discriminant of phi is not trivial");
  } else if (index(clifford_invariant(phi)) > 4) {
    why.push_back("Clifford invariant of phi has index > 4");
  }
  out.ok = why.empty();
  return out;
}

}  // namespace qfb
