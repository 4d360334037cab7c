#pragma once

#include <vector>

#include "dormant/connection.hpp"
#include "dormant/tango.hpp"

namespace dormant {

// Per-mark exponent vectors in F_p^n and their classes modulo the diagonal,
// normalized so that every class representative starts with 0.
struct ExponentVector {
  int n = 0;
  std::vector<std::vector<fp_t>> per_mark;
  std::vector<std::vector<fp_t>> cls;
  friend bool operator==(const ExponentVector& a, const ExponentVector& b) {
    return a.n == b.n && a.per_mark == b.per_mark && a.cls == b.cls;
  }
};

// Builds the vector (0, eps) per mark and projects it. All inner vectors must share a length.
ExponentVector class_of(const std::vector<std::vector<fp_t>>& eps, fp_t p);
// Projection of full GL_n exponents.
ExponentVector exponent_vector(const std::vector<std::vector<fp_t>>& full, fp_t p);

// Pre-Tango connections of monodromy -eps correspond to dormant opers of class [eps].
inline constexpr int kPreTangoExponentSign = -1;
ExponentVector exponent_class_for_pretango(const std::vector<fp_t>& pretango_monodromy, fp_t p);

// Component l lives on T_log^l with N = O.
struct CartanConnection {
  std::vector<LogConnection> components;
  int rank() const { return static_cast<int>(components.size()); }
};

// Component 0 is d on O; component l is the tensor of the duals of nabla_1..nabla_l.
CartanConnection cartan_from_connections(const std::vector<LogConnection>& conns);
// Bundle-corrected monodromy of each component, per mark.
std::vector<std::vector<fp_t>> cartan_monodromy(const CartanConnection& c);

// Rank-2 O-special Miura oper on O + T_log, with T_log trivialized by d/dx.
// The matrix is [[a0, 0], [1, a1]].
struct MiuraGL2Oper {
  LogConnection conn;
  const CurvePtr& curve() const { return conn.curve(); }
  const FFElem& a0() const { return conn.entry(0, 0); }
  const FFElem& a1() const { return conn.entry(1, 1); }
};

// Label O + T_log with the d/dx trivialization.
BundleLabel miura_label(const CurvePtr& curve);
// Checks the special shape and label; throws InvalidArgument.
void check_special(const LogConnection& c);

// Rank 2 with N = O.
MiuraGL2Oper miura_from_cartan(const CartanConnection& c);
// Graded pieces, with component 1 back in the eta^{-1} trivialization.
CartanConnection graded(const MiuraGL2Oper& m);

// Basis change e0 -> lambda e0, e1 -> g e1.
struct BasisChange {
  fp_t lambda = 1;
  FFElem g;
};
// Applies the diagonal basis change, with the new trivializing sections recorded in the label.
LogConnection gauge_diagonal(const LogConnection& c, fp_t lambda, const FFElem& g);
// Normalizes a rank-2 connection on O + T_log with horizontal T_log and unit (2,1) entry.
// Throws DegenerateKS if the Kodaira-Spencer entry is zero or not a unit, InvalidArgument if (1,2) != 0.
std::pair<MiuraGL2Oper, BasisChange> specialize(const LogConnection& general);

// Bundle-corrected diagonal residues per mark.
ExponentVector exponent_of(const MiuraGL2Oper& m);
// Plain residues of a0 dx and a1 dx per mark.
ExponentVector raw_exponent_of(const MiuraGL2Oper& m);

bool is_dormant(const MiuraGL2Oper& m);

// Throws NotPreTango.
MiuraGL2Oper miura_from_tango(const LogConnection& pretango);
MiuraGL2Oper miura_from_tango(const TangoCertificate& cert);
// Inverse on dormant opers; throws NotDormant.
LogConnection pretango_of(const MiuraGL2Oper& m);

}  // namespace dormant
