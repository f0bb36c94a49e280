#pragma once

#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "robin/asymptotics.hpp"
#include "robin/cli/config.hpp"
#include "robin/cli/report.hpp"
#include "robin/fem.hpp"
#include "robin/torsion.hpp"

namespace robin::cli {

/// Compute-once table shared by concurrent checks. The first caller of a key
/// runs the producer; later callers wait for and share its result.
template <class Key, class Value>
class Memo {
 public:
  template <class F>
  const Value& get(const Key& key, F&& make) {
    std::shared_future<Value> fut;
    {
      std::lock_guard lock(mutex_);
      auto it = table_.find(key);
      if (it == table_.end()) it = table_.emplace(key, std::async(std::launch::deferred, std::forward<F>(make)).share()).first;
      fut = it->second;
    }
    return fut.get();
  }

 private:
  std::mutex mutex_;
  std::map<Key, std::shared_future<Value>> table_;
};

/// One Dirichlet cluster with its boundary Gram data and, where the backend
/// provides them, the diagonalizing basis and its normal derivatives.
struct ClusterData {
  asymptotics::Cluster cluster;
  asymptotics::GramDiag gram;
  std::vector<torsion::BoundaryField> fluxes;  // rotated
  std::vector<fem::DiscreteField> basis;       // rotated, fem only
};

class Context {
 public:
  explicit Context(RunConfig config);

  [[nodiscard]] const RunConfig& config() const { return config_; }
  [[nodiscard]] int spectrum_count() const { return count_; }

  [[nodiscard]] const std::vector<double>& dirichlet_values();
  [[nodiscard]] const std::vector<double>& robin_values(double alpha);
  /// Cluster starting at index n with Robin values on `alphas`.
  [[nodiscard]] const ClusterData& cluster(int n, const std::vector<double>& alphas);
  [[nodiscard]] double mult_tol();

  [[nodiscard]] std::shared_ptr<const fem::FemSystem> fem_system();
  [[nodiscard]] const std::vector<fem::EigenPair>& fem_dirichlet();
  [[nodiscard]] const std::vector<fem::EigenPair>& fem_robin(double alpha);
  [[nodiscard]] const torsion::TorsionBackend& torsion_backend();

 private:
  RunConfig config_;
  int count_ = 0;
  Memo<int, std::shared_ptr<const fem::FemSystem>> system_;
  Memo<int, std::shared_ptr<const torsion::TorsionBackend>> torsion_;
  Memo<int, std::vector<fem::EigenPair>> fem_dirichlet_;
  Memo<double, std::vector<fem::EigenPair>> fem_robin_;
  Memo<int, std::vector<double>> dirichlet_;
  Memo<double, std::vector<double>> robin_;
  Memo<std::pair<int, std::vector<double>>, ClusterData> clusters_;
};

/// Rows of one check; throws robin::Error on backend failures.
[[nodiscard]] std::vector<ReportRow> run_check(const std::string& id, Context& ctx);

/// Geometric grid of `points` values from lo to hi inclusive.
[[nodiscard]] std::vector<double> geometric_grid(double lo, double hi, int points);

}  // namespace robin::cli
