// Copyright 2026 The medn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "medn/cv.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "medn/io.hpp"
#include "medn/rng.hpp"

namespace medn {

std::vector<std::size_t> assign_folds(std::size_t n, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
  if (folds > n)
    throw std::invalid_argument("cannot split " + std::to_string(n) + " instances into " +
                                std::to_string(folds) + " folds");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> fold_of(n);
  for (std::size_t pos = 0; pos < n; ++pos) fold_of[order[pos]] = pos * folds / n;
  return fold_of;
}

namespace {

struct GridCell {
  ModelKind model;
  double lambda;
  double beta;
  double radius;
};

std::vector<GridCell> build_grid(const CvOptions& opts) {
  std::vector<GridCell> grid;
  for (ModelKind kind : opts.models) {
    for (double beta : opts.betas) {
      switch (kind) {
        case ModelKind::M3N: grid.push_back({kind, 0.0, beta, 0.0}); break;
        case ModelKind::LapMEDN:
          for (double lambda : opts.lambdas) grid.push_back({kind, lambda, beta, 0.0});
          break;
        case ModelKind::L1M3N:
          for (double radius : opts.radii) grid.push_back({kind, 0.0, beta, radius});
          break;
      }
    }
  }
  auto key = [](const GridCell& c) {
    return std::tuple(static_cast<int>(c.model), c.lambda, c.beta, c.radius);
  };
  std::sort(grid.begin(), grid.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  return grid;
}

}  // namespace

std::vector<CvRow> cross_validate(std::span<const SequenceInstance> data, const FeatureSpec& spec,
                                  const CvOptions& opts) {
  if (opts.betas.empty()) throw std::invalid_argument("cv: empty beta grid");
  const std::vector<std::size_t> fold_of = assign_folds(data.size(), opts.folds, opts.seed);
  const std::vector<GridCell> grid = build_grid(opts);

  std::vector<std::vector<SequenceInstance>> train(opts.folds), test(opts.folds);
  for (std::size_t i = 0; i < data.size(); ++i)
    for (std::size_t f = 0; f < opts.folds; ++f)
      (fold_of[i] == f ? train[f] : test[f]).push_back(data[i]);

  const std::size_t n_jobs = grid.size() * opts.folds;
  std::vector<CvRow> rows(n_jobs);
  auto run_job = [&](std::size_t job) {
    const GridCell& cell = grid[job / opts.folds];
    const std::size_t fold = job % opts.folds;
    TrainOptions to;
    to.kind = cell.model;
    to.beta = cell.beta;
    to.iterations = opts.iterations;
    to.lambda = cell.lambda > 0.0 ? cell.lambda : to.lambda;
    to.lap_C = opts.lap_C;
    to.outer_iters = opts.outer_iters;
    to.radius = cell.radius > 0.0 ? cell.radius : to.radius;
    to.seed = derive_seed(opts.seed, fold);
    const TrainedModel model = train_model(train[fold], spec, to);
    rows[job] = {cell.model, std::to_string(fold), cell.lambda, cell.beta, cell.radius,
                 train[fold].size(), evaluate(model, test[fold])};
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(n_jobs)));
  if (workers == 1) {
    for (std::size_t job = 0; job < n_jobs; ++job) run_job(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t job; (job = next.fetch_add(1)) < n_jobs;) {
          try {
            run_job(job);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<CvRow> out = rows;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<MetricsReport> per_fold;
    for (std::size_t f = 0; f < opts.folds; ++f) per_fold.push_back(rows[g * opts.folds + f].metrics);
    const GridCell& cell = grid[g];
    double n_train = 0.0;
    for (std::size_t f = 0; f < opts.folds; ++f) n_train += static_cast<double>(train[f].size());
    out.push_back({cell.model, "mean", cell.lambda, cell.beta, cell.radius,
                   static_cast<std::size_t>(n_train / static_cast<double>(opts.folds)),
                   aggregate(per_fold)});
  }
  return out;
}

void write_cv_csv(std::ostream& out, const std::vector<CvRow>& rows) {
  write_csv_row(out, {"model", "fold", "lambda", "beta", "radius", "n_train", "per_label_err",
                      "seq_err", "per_label_sd", "seq_sd"});
  for (const auto& r : rows) {
    write_csv_row(out, {std::string(to_string(r.model)), r.fold, format_double(r.lambda),
                        format_double(r.beta), format_double(r.radius), std::to_string(r.n_train),
                        format_double(r.metrics.per_label_err), format_double(r.metrics.seq_err),
                        format_double(r.metrics.per_label_sd), format_double(r.metrics.seq_sd)});
  }
}

}  // namespace medn
