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

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "medn/curves.hpp"
#include "medn/cv.hpp"
#include "medn/io.hpp"
#include "medn/metrics.hpp"
#include "medn/models.hpp"
#include "medn/pac_bayes.hpp"
#include "medn/synth.hpp"

namespace medn::cli {

namespace {

// Output goes to --out when given, else to the command's stdout stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot open " + path + " for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

struct GenArgs {
  GeneratorConfig cfg;
  std::string out;
};

struct TrainArgs {
  std::string data;
  std::string model = "m3n";
  std::string out;
  TrainOptions opts;
  double c = NAN;
};

struct ModelDataArgs {
  std::string model_file;
  std::string data;
  std::string name;
  std::string out;
};

struct CvArgs {
  std::string data;
  std::vector<std::string> models{"m3n", "lapmedn", "l1m3n"};
  CvOptions opts;
  std::string out;
};

struct ShrinkArgs {
  std::vector<double> lambdas{4.0, 6.0};
  double eta_max = 0.0;
  std::size_t points = 101;
  std::string out;
};

struct BallArgs {
  NormBallOptions opts;
  std::vector<double> target{0.0, 1.0};
  std::string out;
};

struct PacArgs {
  BoundInputs in;
  std::string out;
};

void cmd_gen(const GenArgs& a, std::ostream& out) {
  const SyntheticDataset data = gen_dataset(a.cfg);
  {
    Sink sink(a.out, out);
    write_dataset(sink.stream(), to_dataset(data));
  }
  if (a.out.empty()) return;  // stdout already carries the dataset
  const FeatureSpec spec = a.cfg.spec();
  std::size_t nonzero = 0;
  for (std::size_t k = 0; k < spec.num_state(); ++k) nonzero += data.truth.model.weights[k] != 0.0;
  out << "wrote " << data.instances.size() << " instances to " << a.out << '\n';
  out << "true model: d=" << spec.d << " m=" << spec.m << " relevant=" << data.truth.relevant.size()
      << " nonzero_state_weights=" << nonzero << " seed=" << a.cfg.seed << '\n';
  out << "transition weights:";
  for (std::size_t k = spec.num_state(); k < spec.num_weights(); ++k)
    out << ' ' << format_double(data.truth.model.weights[k]);
  out << '\n';
}

void cmd_train(TrainArgs a, std::ostream& out) {
  const Dataset data = load_dataset(a.data);
  a.opts.kind = parse_model_kind(a.model);
  if (!std::isnan(a.c)) a.opts.C = a.c;
  const auto start = std::chrono::steady_clock::now();
  const TrainedModel model = train_model(data.instances, data.spec, a.opts);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  save_model(a.out, model);
  out << "model=" << to_string(model.kind) << " n_train=" << model.n_train
      << " objective=" << format_double(training_objective(model, data.instances))
      << " wall_time_s=" << seconds << '\n';
}

void cmd_predict(const ModelDataArgs& a, std::ostream& out) {
  const TrainedModel model = load_model(a.model_file);
  const Dataset data = load_dataset(a.data);
  if (data.spec != model.spec) throw std::invalid_argument("model and dataset shapes differ");
  Sink sink(a.out, out);
  for (const auto& inst : data.instances)
    sink.stream() << nlohmann::json{{"y", model.predict(inst.features)}}.dump() << '\n';
}

void cmd_eval(const ModelDataArgs& a, std::ostream& out) {
  const TrainedModel model = load_model(a.model_file);
  const Dataset data = load_dataset(a.data);
  if (data.spec != model.spec) throw std::invalid_argument("model and dataset shapes differ");
  const MetricsReport r = evaluate(model, data.instances);
  const std::string name = a.name.empty() ? std::filesystem::path(a.data).stem().string() : a.name;
  std::ostringstream csv;
  write_csv_row(csv, {"model", "dataset", "n_train", "per_label_err", "seq_err", "seed"});
  write_csv_row(csv, {std::string(to_string(model.kind)), name, std::to_string(model.n_train),
                      format_double(r.per_label_err), format_double(r.seq_err),
                      std::to_string(model.options.seed)});
  Sink sink(a.out, out);
  sink.stream() << csv.str();
  if (!a.out.empty()) out << csv.str();
}

void cmd_cv(CvArgs a, std::ostream& out) {
  const Dataset data = load_dataset(a.data);
  a.opts.models.clear();
  for (const auto& m : a.models) a.opts.models.push_back(parse_model_kind(m));
  const auto rows = cross_validate(data.instances, data.spec, a.opts);
  Sink sink(a.out, out);
  write_cv_csv(sink.stream(), rows);
}

void cmd_shrink(const ShrinkArgs& a, std::ostream& out) {
  double eta_max = a.eta_max;
  if (!(eta_max > 0.0)) {
    double lo = INFINITY;
    for (double l : a.lambdas) lo = std::min(lo, l);
    eta_max = 0.95 * std::sqrt(lo);
  }
  const auto rows = shrinkage_curve(a.lambdas, eta_max, a.points);
  Sink sink(a.out, out);
  write_shrinkage_csv(sink.stream(), rows);
}

void cmd_ball(BallArgs a, std::ostream& out, std::ostream& err) {
  if (a.target.size() != 2) throw std::invalid_argument("--target takes two numbers");
  a.opts.target_w1 = a.target[0];
  a.opts.target_w2 = a.target[1];
  const auto rows = norm_ball(a.opts);
  for (const auto& r : rows)
    if (!r.converged)
      err << "warning: root finder did not converge at lambda=" << format_double(r.lambda)
          << " theta=" << format_double(r.theta) << '\n';
  Sink sink(a.out, out);
  write_norm_ball_csv(sink.stream(), rows);
}

void cmd_pac(const PacArgs& a, std::ostream& out) {
  const PacBound b = pac_bound(a.in);
  Sink sink(a.out, out);
  write_csv_row(sink.stream(), {"m", "empirical", "sampling_term", "complexity_term", "bound"});
  write_csv_row(sink.stream(), {std::to_string(b.m), format_double(b.empirical),
                                format_double(b.sampling_term), format_double(b.complexity_term),
                                format_double(b.value)});
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximum entropy discrimination Markov networks for sequence labeling"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen-synth", "Generate a synthetic dataset from a random chain CRF");
  g->add_option("--d", gen.cfg.d, "Input features")->capture_default_str();
  g->add_option("--d-rel", gen.cfg.d_rel, "Relevant input features")->capture_default_str();
  g->add_option("--L", gen.cfg.L, "Sequence length")->capture_default_str();
  g->add_option("--m", gen.cfg.m, "Label arity")->capture_default_str();
  g->add_option("--n", gen.cfg.n_samples, "Instances")->capture_default_str();
  g->add_option("--sweeps", gen.cfg.gibbs_iters, "Gibbs sweeps per sequence")->capture_default_str();
  g->add_flag("--correlated", gen.cfg.correlated, "Group-correlated relevant features");
  g->add_option("--group-size", gen.cfg.group_size)->capture_default_str();
  g->add_option("--noise-sd", gen.cfg.noise_sd)->capture_default_str();
  g->add_option("--seed", gen.cfg.seed)->capture_default_str();
  g->add_option("--out", gen.out, "Output dataset (stdout if omitted)");

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train m3n, lapmedn or l1m3n");
  t->add_option("--data", train.data)->required();
  t->add_option("--model", train.model)->check(CLI::IsMember({"m3n", "lapmedn", "l1m3n"}))->capture_default_str();
  t->add_option("--out", train.out)->required();
  t->add_option("--beta", train.opts.beta)->capture_default_str();
  t->add_option("--c", train.c, "Slack penalty (default 200*beta)");
  t->add_option("--iters", train.opts.iterations, "Passes over the data")->capture_default_str();
  t->add_option("--lambda", train.opts.lambda)->capture_default_str();
  t->add_option("--lap-c", train.opts.lap_C, "LapMEDN multiplier on C")->capture_default_str();
  t->add_option("--outer-iters", train.opts.outer_iters)->capture_default_str();
  t->add_option("--radius", train.opts.radius)->capture_default_str();
  t->add_option("--seed", train.opts.seed)->capture_default_str();

  ModelDataArgs pred;
  auto* p = app.add_subcommand("predict", "Label a dataset with a trained model");
  p->add_option("--model-file", pred.model_file)->required();
  p->add_option("--data", pred.data)->required();
  p->add_option("--out", pred.out);

  ModelDataArgs ev;
  auto* e = app.add_subcommand("eval", "Per-label and per-sequence error of a model");
  e->add_option("--model-file", ev.model_file)->required();
  e->add_option("--data", ev.data)->required();
  e->add_option("--name", ev.name, "Dataset name for the CSV (default: file stem)");
  e->add_option("--out", ev.out);

  CvArgs cv;
  auto* c = app.add_subcommand("cv", "Train-on-one-fold cross-validation over a grid");
  c->add_option("--data", cv.data)->required();
  c->add_option("--folds", cv.opts.folds)->capture_default_str();
  c->add_option("--models", cv.models)->delimiter(',');
  c->add_option("--lambda", cv.opts.lambdas)->delimiter(',');
  c->add_option("--beta", cv.opts.betas)->delimiter(',');
  c->add_option("--radius", cv.opts.radii)->delimiter(',');
  c->add_option("--iters", cv.opts.iterations)->capture_default_str();
  c->add_option("--outer-iters", cv.opts.outer_iters)->capture_default_str();
  c->add_option("--lap-c", cv.opts.lap_C)->capture_default_str();
  c->add_option("--seed", cv.opts.seed)->capture_default_str();
  c->add_option("--jobs", cv.opts.jobs)->capture_default_str();
  c->add_option("--out", cv.out);

  ShrinkArgs sh;
  auto* s = app.add_subcommand("shrinkage-curve", "Posterior mean versus eta per prior");
  s->add_option("--lambda", sh.lambdas)->delimiter(',');
  s->add_option("--eta-max", sh.eta_max, "Grid half-width (default 0.95*sqrt(min lambda))");
  s->add_option("--points", sh.points)->capture_default_str();
  s->add_option("--out", sh.out);

  BallArgs ball;
  auto* b = app.add_subcommand("norm-ball", "L1, L2 and KL-norm ball boundaries in 2-D");
  b->add_option("--lambda", ball.opts.lambdas)->delimiter(',');
  b->add_option("--target", ball.target, "Point the KL boundary passes through")->delimiter(',');
  b->add_option("--points", ball.opts.points)->capture_default_str();
  b->add_option("--out", ball.out);

  PacArgs pac;
  auto* pb = app.add_subcommand("pac-bound", "Explicit PAC-Bayes margin bound");
  pb->add_option("--n", pac.in.N)->required();
  pb->add_option("--y-card", pac.in.y_card, "|Y|")->required();
  pb->add_option("--c", pac.in.c)->capture_default_str();
  pb->add_option("--gamma", pac.in.gamma)->capture_default_str();
  pb->add_option("--kl", pac.in.kl)->required();
  pb->add_option("--delta", pac.in.delta)->capture_default_str();
  pb->add_option("--emp-rate", pac.in.empirical_margin_rate)->capture_default_str();
  pb->add_option("--out", pac.out);

  std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& pe) {
    return app.exit(pe, out, err);
  }

  try {
    if (*g) cmd_gen(gen, out);
    else if (*t) cmd_train(train, out);
    else if (*p) cmd_predict(pred, out);
    else if (*e) cmd_eval(ev, out);
    else if (*c) cmd_cv(cv, out);
    else if (*s) cmd_shrink(sh, out);
    else if (*b) cmd_ball(ball, out, err);
    else if (*pb) cmd_pac(pac, out);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace medn::cli
