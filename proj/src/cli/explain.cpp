#include <map>
#include <ostream>

#include "robin/cli/config.hpp"
#include "robin/cli/run.hpp"

namespace robin::cli {

namespace {

const std::map<std::string, std::string>& texts() {
  static const std::map<std::string, std::string> t = {
      {"spectrum",
       "spectrum: Robin eigenvalues below their Dirichlet limits.\n"
       "anchor: monotone convergence lambda_n^alpha -> lambda_n as alpha -> infinity (Theorem 1.1 setting).\n"
       "pass: lambda_n^alpha < lambda_n for every grid alpha, strictly increasing along the grid.\n"},
      {"torsion_bounds",
       "torsion_bounds: boundary torsional rigidity T_alpha(bd, f) for 20 seeded random data f.\n"
       "anchor: Definition 1.2, Lemma 3.2 (energy identity) and Lemma 3.4 (bounds), Lemma 3.7 (trace rate).\n"
       "pass: T = int|grad U|^2 + alpha int U^2 to 1e-9 relative;\n"
       "      (int f)^2/|bd| <= alpha T <= ||f||^2 and alpha||f||^4/(||grad U_f||^2 + alpha||f||^2) <= alpha T\n"
       "      with slack >= -1e-8; ||alpha U - f||^2 <= 2||f|| ||grad U_f||/sqrt(alpha) and\n"
       "      ||alpha U - f|| <= ||d_nu U_f||/alpha with relative slack h on meshes.\n"},
      {"monotonicity",
       "monotonicity: derivative of alpha -> alpha T_alpha.\n"
       "anchor: Lemma 3.3, d(alpha T)/d alpha = int |grad U_alpha|^2.\n"
       "pass: central difference (d alpha = alpha/100) within 1% of int|grad U|^2; alpha T nondecreasing.\n"},
      {"expansion",
       "expansion: first-order eigenvalue expansion.\n"
       "anchor: Theorem 1.1, lambda^alpha_{n+i-1} = lambda_n - mu_{n,i}/alpha + o(1/alpha),\n"
       "        mu_{n,i} the eigenvalues of the boundary Gram form of d_nu phi on the eigenspace.\n"
       "pass: deficit lambda_n - lambda^alpha positive and decreasing; rows list the fitted remainder slope.\n"},
      {"eigenfunctions",
       "eigenfunctions: Robin eigenfunctions versus Dirichlet eigenfunctions (fem backend).\n"
       "anchor: Theorem 1.4 and Corollary 1.5; boundary mass corollary alpha^2 int|phi^alpha|^2 -> int(d_nu phi)^2.\n"
       "pass: alpha ||phi - Pi phi/||Pi phi|| ||^2_H within 10% of int(d_nu phi)^2 (warn otherwise);\n"
       "      alpha r1 decreasing; fail only when the projection norm drops below 1/2.\n"},
      {"omega_rho",
       "omega_rho: remainder functionals omega_n(alpha) and rho_n(alpha).\n"
       "anchor: Lemmas 4.4 and 4.5, alpha omega_n -> 0 and alpha rho_n -> 0.\n"
       "pass: exact1d matches the closed forms to 1e-10; fem values strictly decreasing along the grid\n"
       "      once they start to decrease (a leading rise is reported as warn).\n"},
      {"splitting",
       "splitting: rectangle eigenvalue splitting of a degenerate Dirichlet pair.\n"
       "anchor: Corollary 1.8, alpha (lambda^alpha_max - lambda^alpha_min) -> mu_1 - mu_m.\n"
       "pass: Robin values strictly distinct when mu differ; notes give the relative gap and the split threshold.\n"},
      {"rates",
       "rates: log-log slope of |lambda_n - lambda^alpha - mu/alpha| against alpha.\n"
       "anchor: Theorem 1.1 remainder (O(alpha^-2) for smooth domains and the exact 1D expansion).\n"
       "pass: slope <= -1.7 on exact backends; fem rows warn unless slope < -1.\n"},
  };
  return t;
}

}  // namespace

std::optional<std::string> explain_text(const std::string& id) {
  auto it = texts().find(id);
  if (it == texts().end()) return std::nullopt;
  return it->second;
}

int explain_command(const std::string& id, std::ostream& out, std::ostream& err) {
  if (auto text = explain_text(id)) {
    out << *text;
    return kExitOk;
  }
  err << "robin-limit: unknown check '" << id << "'; valid checks:";
  for (const auto& k : known_checks()) err << ' ' << k;
  err << '\n';
  return kExitUsage;
}

}  // namespace robin::cli
