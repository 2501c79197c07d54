#include "agreekit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <sstream>
#include <vector>

#include "agreekit/design.hpp"
#include "agreekit/experiments.hpp"
#include "agreekit/io.hpp"
#include "agreekit/presets.hpp"
#include "agreekit/simulate.hpp"
#include "agreekit/svg.hpp"

namespace agreekit::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

int run_guarded(std::ostream& log, const std::function<int()>& body) {
  try {
    return body();
  } catch (const EmptyKernel& e) {
    log << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const NoStableFeasiblePoint& e) {
    log << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kInputError;
  }
}

fs::path prepare_out_dir(const CommonOptions& c) {
  const fs::path dir = c.out_dir.empty() ? fs::path(".") : fs::path(c.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_output(const fs::path& path, const std::string& content,
                  bool force) {
  if (!force && fs::exists(path))
    throw std::runtime_error("refusing to overwrite " + path.string() +
                             " (pass --force to allow)");
  io::write_text(path.string(), content);
}

Digraph load_graph(const std::string& spec) {
  for (const std::string& name : preset_graph_names())
    if (spec == name) return preset_graph(spec);
  return io::read_graph(spec);
}

Vector load_vector(const std::string& path) {
  const Matrix M = io::read_matrix(path);
  if (M.rows() == 1) return M.row(0).transpose();
  if (M.cols() == 1) return M.col(0);
  throw std::invalid_argument("expected a vector in " + path);
}

ProjectionWeights load_weights(const std::string& path, std::optional<int> k) {
  const Matrix W = io::read_matrix(path);
  if (W.rows() != W.cols())
    throw std::invalid_argument("weight matrix must be square: " + path);
  const int rank = k ? *k : numerical_rank(W);
  return decompose_projection(W, rank);
}

std::string edge_label(const Digraph& g, const Edge& e) {
  if (g.n <= 9)
    return "a" + std::to_string(e.row + 1) + std::to_string(e.col + 1);
  return "a(" + std::to_string(e.row + 1) + "," + std::to_string(e.col + 1) +
         ")";
}

ordered_json edge_json(const Edge& e) {
  return ordered_json::array({e.row + 1, e.col + 1});
}

ordered_json check_report(const Digraph& g, int k, long long budget) {
  ordered_json rep;
  rep["n"] = g.n;
  rep["k"] = k;
  const bool connected = is_strongly_connected(g);
  rep["strongly_connected"] = connected;
  const NecessaryCheck nec = check_necessary(g, k);
  rep["edge_count"] = nec.edge_count;
  rep["required_edges"] = nec.required;
  rep["necessary"] = nec.holds;

  std::string verdict;
  if (!nec.holds) {
    verdict = "fails-necessary";
  } else if (!connected) {
    verdict = "unknown";
    rep["reason"] = "not strongly connected";
  } else {
    try {
      PartitionSearchOptions opts;
      opts.decomposition_budget = budget;
      const SufficientPartition part = find_sufficient_partition(g, k, opts);
      rep["hypothesis_holds"] = part.hypothesis_holds;
      if (part.found) {
        verdict = "holds";
        ordered_json av = ordered_json::array();
        ordered_json av_labels = ordered_json::array();
        for (const Edge& e : part.a_v) {
          av.push_back(edge_json(e));
          av_labels.push_back(edge_label(g, e));
        }
        rep["designated_edges"] = av;
        rep["designated_labels"] = av_labels;
        ordered_json wits = ordered_json::array();
        for (const HamiltonianDecomposition& w : part.witnesses) {
          ordered_json wj = ordered_json::array();
          for (const Edge& e : w.all_edges()) wj.push_back(edge_json(e));
          wits.push_back(wj);
        }
        rep["witnesses"] = wits;
        rep["free_edge_count"] = static_cast<int>(part.a_c.size());
      } else {
        verdict = "unknown";
        rep["reason"] = "no designated partition found";
      }
    } catch (const CombinatorialBudgetExceeded&) {
      verdict = "unknown";
      rep["reason"] = "decomposition budget exceeded";
    } catch (const SearchBudgetExceeded&) {
      verdict = "unknown";
      rep["reason"] = "search budget exceeded";
    }
  }
  rep["sufficient"] = verdict;
  return rep;
}

ordered_json certificate_json(const AgreementCertificate& cert,
                              const ProjectionWeights& weights,
                              DesignObjective objective, std::uint64_t seed) {
  ordered_json j;
  j["n"] = weights.n;
  j["k"] = weights.k;
  j["objective"] = objective_name(objective);
  j["seed"] = seed;
  j["certified"] = cert.certified();
  j["objective_value"] = cert.objective_value;
  j["kernel_residual"] = cert.kernel_residual;
  j["essential_abscissa"] = cert.essential_abscissa;  // NaN dumps as null
  j["zero_multiplicity_check"] = cert.zero_multiplicity_check;
  j["charpoly_tail"] = cert.charpoly_tail;
  j["tail_crosschecked"] = cert.tail_crosschecked;
  j["tail_mismatch"] = cert.tail_mismatch;
  j["limit_residual"] = cert.limit_residual;
  j["is_static"] = cert.is_static;
  j["A_csv"] = io::format_matrix_csv(cert.A);
  return j;
}

std::string trace_csv(const SimTrace& t) {
  std::ostringstream o;
  o << "t";
  for (Eigen::Index i = 0; i < t.states.rows(); ++i) o << ",x" << (i + 1);
  o << ",e\n";
  for (Eigen::Index j = 0; j < t.times.size(); ++j) {
    o << io::format_double(t.times(j));
    for (Eigen::Index i = 0; i < t.states.rows(); ++i)
      o << ',' << io::format_double(t.states(i, j));
    o << ',' << io::format_double(t.error_norms(j)) << '\n';
  }
  return o.str();
}

std::string states_csv(const SimTrace& t) {
  std::ostringstream o;
  o << "t";
  for (Eigen::Index i = 0; i < t.states.rows(); ++i) o << ",x" << (i + 1);
  o << '\n';
  for (Eigen::Index j = 0; j < t.times.size(); ++j) {
    o << io::format_double(t.times(j));
    for (Eigen::Index i = 0; i < t.states.rows(); ++i)
      o << ',' << io::format_double(t.states(i, j));
    o << '\n';
  }
  return o.str();
}

std::string error_csv(const SimTrace& t) {
  std::ostringstream o;
  o << "t,e\n";
  for (Eigen::Index j = 0; j < t.times.size(); ++j)
    o << io::format_double(t.times(j)) << ','
      << io::format_double(t.error_norms(j)) << '\n';
  return o.str();
}

// Common trace artifact set: canonical CSV plus one CSV per figure.
void write_trace_bundle(const fs::path& dir, const std::string& stem,
                        const SimTrace& trace, const CommonOptions& common,
                        const std::string& title) {
  write_output(dir / (stem + "_trace.csv"), trace_csv(trace), common.force);
  write_output(dir / (stem + "_states.csv"), states_csv(trace), common.force);
  write_output(dir / (stem + "_states.svg"),
               svg::render_state_chart(trace, title), common.force);
  write_output(dir / (stem + "_error.csv"), error_csv(trace), common.force);
  write_output(dir / (stem + "_error.svg"),
               svg::render_error_chart(trace, title + " disagreement"),
               common.force);
}

std::string format_json(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

int cmd_graph(const GraphConfig& cfg, std::ostream& log) {
  return run_guarded(log, [&]() -> int {
    Digraph g;
    if (!cfg.preset.empty()) {
      g = preset_graph(cfg.preset);
    } else {
      GraphModel model = GraphModel::parse(cfg.model);
      model.alpha = cfg.alpha;
      model.p = cfg.p;
      model.m = cfg.m;
      if (cfg.n < 1) throw std::invalid_argument("graph size must be positive");
      g = generate_graph(model, cfg.n, cfg.common.seed);
    }
    const fs::path dir = prepare_out_dir(cfg.common);
    const fs::path path = dir / cfg.out_name;
    write_output(path, format_json(io::graph_to_json(g)), cfg.common.force);
    log << "graph: n=" << g.n << " edges=" << g.num_edges() << " -> "
        << path.string() << '\n';
    return kOk;
  });
}

int cmd_check(const CheckConfig& cfg, std::ostream& log) {
  return run_guarded(log, [&]() -> int {
    const Digraph g = load_graph(cfg.graph);
    if (cfg.k < 1 || cfg.k > g.n)
      throw std::invalid_argument("k must be in 1..n");
    const fs::path dir = prepare_out_dir(cfg.common);
    const ordered_json rep = check_report(g, cfg.k, cfg.common.budget);
    write_output(dir / "check.json", format_json(rep), cfg.common.force);
    log << "check: necessary=" << (rep["necessary"].get<bool>() ? "true" : "false")
        << " sufficient=" << rep["sufficient"].get<std::string>() << '\n';
    return kOk;
  });
}

int cmd_design(const DesignConfig& cfg, std::ostream& log) {
  return run_guarded(log, [&]() -> int {
    DesignProblem problem;
    problem.graph = load_graph(cfg.graph);
    problem.weights = load_weights(cfg.weights, cfg.k);
    if (problem.weights.n != problem.graph.n)
      throw std::invalid_argument("graph and weight dimensions differ");
    problem.objective = parse_objective(cfg.objective);
    problem.options.max_iterations = cfg.max_iterations;
    problem.options.restarts = cfg.restarts;
    problem.options.seed = cfg.common.seed;
    problem.options.threads = cfg.common.threads;

    const AgreementCertificate cert = design(problem);
    const fs::path dir = prepare_out_dir(cfg.common);
    write_output(dir / "certificate.json",
                 format_json(certificate_json(cert, problem.weights,
                                              problem.objective,
                                              cfg.common.seed)),
                 cfg.common.force);
    write_output(dir / "A.csv", io::format_matrix_csv(cert.A),
                 cfg.common.force);
    log << "design: certified=" << (cert.certified() ? "true" : "false")
        << " objective=" << objective_name(problem.objective)
        << " value=" << io::format_double(cert.objective_value)
        << " essential=" << io::format_double(cert.essential_abscissa) << '\n';
    return kOk;
  });
}

int cmd_simulate(const SimulateConfig& cfg, std::ostream& log) {
  return run_guarded(log, [&]() -> int {
    const Matrix A = io::read_matrix(cfg.matrix);
    if (A.rows() != A.cols())
      throw std::invalid_argument("state matrix must be square");
    const int n = static_cast<int>(A.rows());
    std::optional<ProjectionWeights> weights;
    if (!cfg.weights.empty()) {
      weights = load_weights(cfg.weights, cfg.k);
      if (weights->n != n)
        throw std::invalid_argument("weight matrix dimension mismatch");
    }
    Vector x0 = cfg.x0.empty()
                    ? Vector(Vector::LinSpaced(n, 1.0 / n, 1.0))
                    : load_vector(cfg.x0);
    if (x0.size() != n) throw std::invalid_argument("state size mismatch");
    if (!(cfg.horizon > 0) || !(cfg.dt > 0) || cfg.dt > cfg.horizon)
      throw std::invalid_argument("need 0 < dt <= horizon");

    const SimTrace trace = simulate_static(
        A, x0, cfg.horizon, cfg.dt, weights ? &*weights : nullptr);
    const fs::path dir = prepare_out_dir(cfg.common);
    write_trace_bundle(dir, "simulate", trace, cfg.common, "free run");

    ordered_json summary;
    summary["horizon"] = cfg.horizon;
    summary["dt"] = cfg.dt;
    summary["final_error"] = trace.error_norms(trace.error_norms.size() - 1);
    summary["max_error"] = trace.error_norms.maxCoeff();
    summary["stiffness_warning"] = trace.stiffness_warning;
    write_output(dir / "simulate_summary.json", format_json(summary),
                 cfg.common.force);
    log << "simulate: final_error="
        << io::format_double(summary["final_error"].get<double>()) << '\n';
    return kOk;
  });
}

int cmd_track(const TrackConfig& cfg, std::ostream& log) {
  return run_guarded(log, [&]() -> int {
    const Matrix A = io::read_matrix(cfg.matrix);
    if (A.rows() != A.cols())
      throw std::invalid_argument("state matrix must be square");
    const int n = static_cast<int>(A.rows());
    if (cfg.weights.empty())
      throw std::invalid_argument("tracking needs --weights");
    const ProjectionWeights weights = load_weights(cfg.weights, cfg.k);
    if (weights.n != n)
      throw std::invalid_argument("weight matrix dimension mismatch");
    if (!(cfg.horizon > 0) || !(cfg.dt > 0) || cfg.dt > cfg.horizon)
      throw std::invalid_argument("need 0 < dt <= horizon");

    const Vector base = cfg.u0.empty()
                            ? Vector(Vector::LinSpaced(n, 1.0 / n, 1.0))
                            : load_vector(cfg.u0);
    if (base.size() != n) throw std::invalid_argument("base size mismatch");
    Vector dir = Vector::LinSpaced(n, 1.0, static_cast<double>(n));
    dir.normalize();

    InputSignal input;
    const double amp = cfg.amplitude, tr = cfg.ramp_time, om = cfg.frequency;
    if (cfg.input == "constant") {
      input.u = [base](double) { return base; };
      input.udot = [n](double) { return Vector(Vector::Zero(n)); };
    } else if (cfg.input == "ramp") {
      if (!(tr > 0)) throw std::invalid_argument("ramp time must be positive");
      input.u = [base, dir, amp, tr](double t) {
        return Vector(base + dir * (amp * std::min(t, tr)));
      };
      input.udot = [dir, amp, tr, n](double t) {
        return t < tr ? Vector(dir * amp) : Vector(Vector::Zero(n));
      };
    } else if (cfg.input == "sinusoid") {
      if (!(om > 0)) throw std::invalid_argument("frequency must be positive");
      input.u = [base, dir, amp, om](double t) {
        return Vector(base + dir * (amp / om * std::sin(om * t)));
      };
      input.udot = [dir, amp, om](double t) {
        return Vector(dir * (amp * std::cos(om * t)));
      };
    } else {
      throw std::invalid_argument("unknown input family: " + cfg.input);
    }

    const double input_consistency = validate_input(input, cfg.horizon);
    const SimTrace trace =
        simulate_tracking(A, input, cfg.horizon, cfg.dt, &weights);
    const IssReport iss = iss_report(trace, A, weights);

    const fs::path dir_out = prepare_out_dir(cfg.common);
    write_trace_bundle(dir_out, "track", trace, cfg.common,
                       "tracking (" + cfg.input + ")");

    ordered_json summary;
    summary["input"] = cfg.input;
    summary["horizon"] = cfg.horizon;
    summary["dt"] = cfg.dt;
    summary["input_consistency"] = input_consistency;
    summary["final_error"] = trace.error_norms(trace.error_norms.size() - 1);
    summary["max_error"] = trace.error_norms.maxCoeff();
    summary["sup_udot"] = trace.udot_norms.maxCoeff();
    summary["stiffness_warning"] = trace.stiffness_warning;
    summary["measured_decay_rate"] = iss.measured_decay_rate;
    if (iss.measured_gain)
      summary["measured_gain"] = *iss.measured_gain;
    else
      summary["measured_gain"] = nullptr;
    summary["bound_satisfied"] = iss.bound_satisfied;
    write_output(dir_out / "track_summary.json", format_json(summary),
                 cfg.common.force);
    log << "track: final_error="
        << io::format_double(summary["final_error"].get<double>())
        << " decay=" << io::format_double(iss.measured_decay_rate) << '\n';
    if (cfg.common.strict && trace.stiffness_warning) {
      log << "warning escalated: integrator hit its minimum step\n";
      return kEscalatedWarning;
    }
    return kOk;
  });
}

int cmd_experiment_comm(const CommConfig& cfg, std::ostream& log) {
  return run_guarded(log, [&]() -> int {
    GraphModel model = GraphModel::parse(cfg.model);
    model.p = cfg.p;
    model.m = cfg.m;
    const CommComplexityResult r =
        comm_complexity(model, cfg.n, cfg.k, cfg.trials, cfg.common.seed);

    ordered_json j;
    j["model"] = r.model;
    j["n"] = r.n;
    j["k"] = r.k;
    j["trials"] = r.trials;
    j["seed"] = cfg.common.seed;
    j["total_tx_agreement"] = r.total_tx_agreement;
    j["total_tx_parallel"] = r.total_tx_parallel;
    j["per_agent_tx_agreement"] = r.per_agent_tx_agreement;
    j["per_agent_tx_parallel"] = r.per_agent_tx_parallel;
    j["mean_out_degree"] = r.mean_out_degree;
    j["ratio"] = r.ratio;

    std::ostringstream csv;
    csv << "trial,tx_agreement,tx_parallel\n";
    svg::Series agree, parallel;
    agree.label = "rank-k agreement";
    parallel.label = "k parallel consensus";
    for (int t = 0; t < cfg.trials; ++t) {
      const long long tx = r.per_trial_tx[t];
      csv << t << ',' << tx << ',' << (static_cast<long long>(cfg.k) * tx)
          << '\n';
      agree.x.push_back(t);
      agree.y.push_back(static_cast<double>(tx));
      parallel.x.push_back(t);
      parallel.y.push_back(static_cast<double>(cfg.k) * tx);
    }
    svg::ChartOptions opt;
    opt.title = "transmissions per iteration (" + r.model + ")";
    opt.x_label = "trial";
    opt.y_label = "transmissions";

    const fs::path dir = prepare_out_dir(cfg.common);
    write_output(dir / (cfg.prefix + ".json"), format_json(j),
                 cfg.common.force);
    write_output(dir / (cfg.prefix + ".csv"), csv.str(), cfg.common.force);
    write_output(dir / (cfg.prefix + ".svg"),
                 svg::render_chart({agree, parallel}, opt), cfg.common.force);
    log << "comm-complexity: model=" << r.model
        << " ratio=" << io::format_double(r.ratio)
        << " per_agent=" << io::format_double(r.per_agent_tx_agreement)
        << '\n';
    return kOk;
  });
}

int cmd_experiment_regression(const RegressionConfig& cfg, std::ostream& log) {
  return run_guarded(log, [&]() -> int {
    Matrix H;
    Vector y;
    Digraph graph;
    std::optional<Vector> theta_true;
    if (cfg.H.empty() != cfg.y.empty())
      throw std::invalid_argument("provide both H and y, or neither");
    if (cfg.H.empty()) {
      const RegressionPreset preset = regression_preset(cfg.n, cfg.common.seed);
      H = preset.H;
      y = preset.y;
      graph = cfg.graph.empty() ? preset.graph : load_graph(cfg.graph);
      theta_true = preset.theta_true;
    } else {
      H = io::read_matrix(cfg.H);
      y = load_vector(cfg.y);
      graph = cfg.graph.empty()
                  ? generate_graph(GraphModel::circulant(4),
                                   static_cast<int>(H.rows()))
                  : load_graph(cfg.graph);
    }

    const RegressionResult r = regression_demo(H, y, graph, cfg.common.seed);
    const Vector fit = H * r.theta_ls;

    ordered_json j;
    j["n"] = static_cast<int>(H.rows());
    j["k"] = static_cast<int>(H.cols());
    j["seed"] = cfg.common.seed;
    j["certified"] = r.cert.certified();
    j["essential_abscissa"] = r.cert.essential_abscissa;
    j["objective_value"] = r.cert.objective_value;
    std::vector<double> theta(r.theta_ls.data(),
                              r.theta_ls.data() + r.theta_ls.size());
    j["theta_ls"] = theta;
    if (theta_true) {
      std::vector<double> tt(theta_true->data(),
                             theta_true->data() + theta_true->size());
      j["theta_true"] = tt;
    }
    j["projection_gap"] = (r.y_hat - fit).norm();
    j["normal_equation_residual"] =
        (H.transpose() * (y - r.y_hat)).cwiseAbs().maxCoeff();
    j["final_error"] = r.trace.error_norms(r.trace.error_norms.size() - 1);

    std::ostringstream csv;
    csv << "index,y,y_hat,fit\n";
    svg::Series sy, syh, sfit;
    sy.label = "y";
    syh.label = "y_hat";
    sfit.label = "least-squares fit";
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      csv << (i + 1) << ',' << io::format_double(y(i)) << ','
          << io::format_double(r.y_hat(i)) << ',' << io::format_double(fit(i))
          << '\n';
      sy.x.push_back(static_cast<double>(i + 1));
      sy.y.push_back(y(i));
      syh.x.push_back(static_cast<double>(i + 1));
      syh.y.push_back(r.y_hat(i));
      sfit.x.push_back(static_cast<double>(i + 1));
      sfit.y.push_back(fit(i));
    }
    svg::ChartOptions opt;
    opt.title = "distributed regression";
    opt.x_label = "agent";
    opt.y_label = "value";

    const fs::path dir = prepare_out_dir(cfg.common);
    write_output(dir / "regression.json", format_json(j), cfg.common.force);
    write_output(dir / "regression.csv", csv.str(), cfg.common.force);
    write_output(dir / "regression.svg",
                 svg::render_chart({sy, syh, sfit}, opt), cfg.common.force);
    write_output(dir / "regression_error.csv", error_csv(r.trace),
                 cfg.common.force);
    write_output(dir / "regression_error.svg",
                 svg::render_error_chart(r.trace, "regression disagreement"),
                 cfg.common.force);
    log << "regression: projection_gap="
        << io::format_double(j["projection_gap"].get<double>())
        << " normal_eq=" << io::format_double(
               j["normal_equation_residual"].get<double>())
        << '\n';
    return kOk;
  });
}

namespace {

const char* mode_name(FormationMode mode) {
  switch (mode) {
    case FormationMode::Consensus: return "consensus";
    case FormationMode::Orthogonal: return "orthogonal";
    case FormationMode::Oblique: return "oblique";
  }
  return "?";
}

std::string paths_csv(const SimTrace& trace, int n_robots) {
  std::ostringstream o;
  for (int i = 0; i < n_robots; ++i) {
    if (i) o << ',';
    o << 'x' << (i + 1) << ",y" << (i + 1);
  }
  o << '\n';
  for (Eigen::Index j = 0; j < trace.times.size(); ++j) {
    for (int i = 0; i < 2 * n_robots; ++i) {
      if (i) o << ',';
      o << io::format_double(trace.states(i, j));
    }
    o << '\n';
  }
  return o.str();
}

std::string paths_svg(const SimTrace& trace, int n_robots,
                      const std::string& title) {
  std::vector<svg::Series> series;
  for (int i = 0; i < n_robots; ++i) {
    svg::Series s;
    s.label = "robot " + std::to_string(i + 1);
    for (Eigen::Index j = 0; j < trace.times.size(); ++j) {
      s.x.push_back(trace.states(2 * i, j));
      s.y.push_back(trace.states(2 * i + 1, j));
    }
    series.push_back(std::move(s));
  }
  svg::ChartOptions opt;
  opt.title = title;
  opt.x_label = "x";
  opt.y_label = "y";
  opt.equal_axes = true;
  return svg::render_chart(series, opt);
}

ordered_json positions_json(const Matrix& P) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    out.push_back(ordered_json::array({P(i, 0), P(i, 1)}));
  return out;
}

}  // namespace

int cmd_experiment_formation(const FormationConfig& cfg, std::ostream& log) {
  return run_guarded(log, [&]() -> int {
    const FormationSpec spec = FormationSpec::default_octet();
    const Digraph graph =
        cfg.graph.empty()
            ? generate_graph(GraphModel::circulant(6), spec.n_robots)
            : load_graph(cfg.graph);

    std::vector<FormationMode> modes;
    if (cfg.mode == "all")
      modes = {FormationMode::Consensus, FormationMode::Orthogonal,
               FormationMode::Oblique};
    else if (cfg.mode == "consensus")
      modes = {FormationMode::Consensus};
    else if (cfg.mode == "orthogonal")
      modes = {FormationMode::Orthogonal};
    else if (cfg.mode == "oblique")
      modes = {FormationMode::Oblique};
    else
      throw std::invalid_argument("unknown formation mode: " + cfg.mode);

    const fs::path dir = prepare_out_dir(cfg.common);
    ordered_json summary;
    summary["graph_edges"] = graph.num_edges();
    summary["seed"] = cfg.common.seed;

    for (FormationMode mode : modes) {
      const std::string name = mode_name(mode);
      const FormationResult r =
          formation_demo(spec, mode, graph, cfg.common.seed);

      ordered_json mj;
      mj["certified"] = r.cert.certified();
      mj["essential_abscissa"] = r.cert.essential_abscissa;
      mj["objective_value"] = r.cert.objective_value;
      mj["final_positions"] = positions_json(r.final_positions);
      mj["target_positions"] = positions_json(r.target_positions);
      mj["max_target_gap"] =
          (r.final_positions - r.target_positions).cwiseAbs().maxCoeff();
      const Matrix residual = spec.constraint * r.final_positions;
      mj["constraint_residual"] = residual.cwiseAbs().maxCoeff();
      if (mode == FormationMode::Consensus) {
        const double cx = r.final_positions.col(0).mean();
        const double cy = r.final_positions.col(1).mean();
        mj["rendezvous_point"] = ordered_json::array({cx, cy});
        mj["max_distance_from_origin"] =
            r.final_positions.rowwise().norm().maxCoeff();
      }
      summary[name] = mj;

      const std::string stem = "formation_" + name;
      write_output(dir / (stem + "_paths.csv"),
                   paths_csv(r.trace2d, spec.n_robots), cfg.common.force);
      write_output(dir / (stem + "_paths.svg"),
                   paths_svg(r.trace2d, spec.n_robots, "formation: " + name),
                   cfg.common.force);
      write_output(dir / (stem + "_error.csv"), error_csv(r.trace2d),
                   cfg.common.force);
      write_output(dir / (stem + "_error.svg"),
                   svg::render_error_chart(r.trace2d,
                                           "formation disagreement: " + name),
                   cfg.common.force);
      log << "formation " << name << ": constraint_residual="
          << io::format_double(mj["constraint_residual"].get<double>())
          << " max_target_gap="
          << io::format_double(mj["max_target_gap"].get<double>()) << '\n';
    }
    write_output(dir / "formation.json", format_json(summary),
                 cfg.common.force);
    return kOk;
  });
}

int cmd_preset(const std::string& name, const CommonOptions& common,
               std::ostream& log) {
  if (name == "fig1") {
    CommConfig er;
    er.model = "erdos_renyi";
    er.n = 20;
    er.k = 10;
    er.trials = 20;
    er.p = 0.4;
    er.prefix = "fig1_er";
    er.common = common;
    const int rc1 = cmd_experiment_comm(er, log);
    if (rc1 != kOk) return rc1;
    CommConfig ba = er;
    ba.model = "barabasi_albert";
    ba.m = 3;
    ba.prefix = "fig1_ba";
    return cmd_experiment_comm(ba, log);
  }
  if (name == "fig5") {
    RegressionConfig cfg;
    cfg.n = 50;
    cfg.common = common;
    return cmd_experiment_regression(cfg, log);
  }
  if (name == "fig6") {
    FormationConfig cfg;
    cfg.mode = "all";
    cfg.common = common;
    return cmd_experiment_formation(cfg, log);
  }
  if (name == "example3") {
    return run_guarded(log, [&]() -> int {
      const fs::path dir = prepare_out_dir(common);
      ordered_json rep;
      rep["example3a"] = check_report(preset_graph("example3a"), 2,
                                      common.budget);
      rep["example3b"] = check_report(preset_graph("example3b"), 3,
                                      common.budget);
      write_output(dir / "example3.json", format_json(rep), common.force);
      for (const char* key : {"example3a", "example3b"})
        log << key << ": necessary="
            << (rep[key]["necessary"].get<bool>() ? "true" : "false")
            << " sufficient=" << rep[key]["sufficient"].get<std::string>()
            << '\n';
      return kOk;
    });
  }
  log << "error: unknown preset " << name << '\n';
  return kInputError;
}

}  // namespace agreekit::cli
