#pragma once

// Classification of 8-dimensional forms with trivial discriminant by the index
// of their Clifford invariant, and construction of (L, psi) with psi in GP_2(L)
// and tr_*(psi) isometric to phi.

#include <string>
#include <vector>

#include "qfb/brauer.hpp"
#include "qfb/etale.hpp"
#include "qfb/qform.hpp"

namespace qfb {

enum class Branch { GP3, PfisterMultiple, TransferNeeded, NotApplicable };

std::string branch_name(Branch b);

struct ClassificationReport {
  std::size_t dim = 0;
  Elem signed_discriminant;
  bool discriminant_trivial = false;
  BrauerClass2 clifford;
  long index = 0;  // 0 when not computed
  Branch branch = Branch::NotApplicable;
  std::string note;
};

/// Search bounds for construct_presentation.
struct PipelineBounds {
  std::size_t max_pfister_slots = 512;   // candidate a in the index <= 2 branches
  std::size_t max_extensions = 64;       // candidate d in the index 4 branch
  std::size_t max_quaternion_classes = 64;  // square classes of L for the slots of Q
  std::size_t max_scalars = 256;         // candidate s in psi = <s> n_Q
  int mu_height = 8;                     // extra small elements of L mixed into the scalars
  bool allow_split = true;               // try L = F x F in the index 4 branch
  WitnessBounds witness;
};

ClassificationReport classify(const QuadraticForm& phi);

struct TransferPresentation {
  EtaleForm psi;  // over the extension psi.ext
  std::vector<GP2Presentation> gp2;  // one per component (one for a field)
  Elem scale;                        // similarity factor applied by scale_by_base (1 if none)
  std::string route;                 // how the presentation was found
};

/// Throws SearchExhausted when the bounded searches fail, PreconditionViolated
/// for the not-applicable branch.
TransferPresentation construct_presentation(const QuadraticForm& phi, const PipelineBounds& b = {});

struct PresentationCheck {
  bool ok = false;
  std::vector<std::string> reasons;  // empty when ok
};

PresentationCheck verify_presentation(const QuadraticForm& phi, const TransferPresentation& T);

}  // namespace qfb
