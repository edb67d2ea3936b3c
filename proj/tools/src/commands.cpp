#include "commands.hpp"

#include "io.hpp"
#include "manifest.hpp"
#include "svg.hpp"

#include "symcount/cartan.hpp"
#include "symcount/enumerate.hpp"
#include "symcount/rootdata.hpp"
#include "symcount/sector.hpp"
#include "symcount/series.hpp"
#include "symcount/volume.hpp"
#include "symcount/wavefront.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace symcount::cli {
namespace {

using nlohmann::json;

std::size_t parse_count(const std::string& text, const char* what) {
  std::size_t pos = 0;
  const double v = std::stod(text, &pos);
  if (pos != text.size() || !(v >= 1) || v != std::floor(v) || v > 1e15)
    throw std::invalid_argument(std::string(what) + ": expected a positive integer, got '" + text + "'");
  return static_cast<std::size_t>(v);
}

std::vector<double> parse_grid(const std::string& text, const char* what) {
  auto grid = parse_double_list(text);
  if (grid.empty()) throw std::invalid_argument(std::string(what) + ": empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument(std::string(what) + ": grid must be strictly increasing");
  return grid;
}

std::vector<int> one_based(const std::string& text, int limit, const char* what) {
  std::vector<int> out;
  for (int v : parse_index_list(text)) {
    if (v < 1 || v > limit) throw std::invalid_argument(std::string(what) + ": index out of range");
    out.push_back(v - 1);
  }
  return out;
}

json matrix_json(const linalg::Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(num(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

json vector_json(const linalg::Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

// Rows separated by ';' or newlines, entries by ',' or whitespace.
linalg::Matrix parse_matrix(const std::string& source) {
  std::string text = source;
  if (std::filesystem::is_regular_file(source)) text = read_file(source);
  std::vector<std::vector<double>> rows;
  std::string row;
  for (char& c : text)
    if (c == ';') c = '\n';
  std::stringstream ss(text);
  while (std::getline(ss, row)) {
    for (char& c : row)
      if (c == ',' || c == '[' || c == ']') c = ' ';
    std::stringstream rs(row);
    std::vector<double> vals;
    std::string tok;
    while (rs >> tok) {
      std::size_t pos = 0;
      vals.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument("matrix: bad entry '" + tok + "'");
    }
    if (!vals.empty()) rows.push_back(std::move(vals));
  }
  const std::size_t n = rows.size();
  if (n == 0) throw std::invalid_argument("matrix: no entries");
  linalg::Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw std::invalid_argument("matrix: must be square");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void emit(RunManifest& run, Context& ctx, const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") ctx.out << content;
  else run.write(path, content);
}

std::string with_suffix(const std::string& out, const std::string& suffix) {
  if (out.empty() || out == "-") return {};
  std::filesystem::path p(out);
  p.replace_extension();
  return p.string() + suffix;
}

json fit_report(const CountSeries& s, int b, const rootdata::ExponentPair& pred) {
  json j;
  try {
    j = to_json(fit_exponent(s.T_grid, s.values, b));
  } catch (const std::invalid_argument& e) {
    j = {{"error", e.what()}, {"b_fixed", b}};
  }
  j["predicted_a"] = rootdata::to_string(pred.a);
  j["predicted_a_value"] = num(boost::rational_cast<double>(pred.a));
  j["predicted_b"] = pred.b;
  j["tail_slope"] = num(tail_slope(s.T_grid, s.values));
  return j;
}

struct SpecOptions {
  int d = 3;
  std::string blocks;
  std::string I;
  std::string signs;
  std::string signature;
  std::string spread;
  std::string frame = "full";
  std::string norm = "max";
};

void add_spec_options(CLI::App* sub, SpecOptions& o) {
  sub->add_option("--d", o.d, "Dimension")->capture_default_str();
  sub->add_option("--blocks", o.blocks, "Block dimensions, e.g. 1,2");
  sub->add_option("--I", o.I, "Glued simple roots (1-based), alternative to --blocks");
  sub->add_option("--signs", o.signs, "Per-block signature: +, -, p:q or *");
  sub->add_option("--signature", o.signature, "Total signature p,q");
  sub->add_option("--spread", o.spread, "Max log eigenvalue spread per block (one value or one per block)");
  sub->add_option("--frame", o.frame, "full or cap:x,y,z:angle")->capture_default_str();
  sub->add_option("--norm", o.norm, "max or frobenius")->capture_default_str();
}

sector::SectorSpec build_spec(const SpecOptions& o) {
  sector::SectorSpec spec;
  if (!o.blocks.empty()) {
    spec.blocks = rootdata::BlockDecomposition(parse_index_list(o.blocks));
    if (spec.blocks.d() != o.d) throw std::invalid_argument("--blocks must sum to --d");
  } else {
    spec.blocks = rootdata::blocks_from_subset(o.d, one_based(o.I, o.d - 1, "--I"));
  }
  const int nb = spec.blocks.n() + 1;
  if (!o.signs.empty()) spec.constraints = sector::parse_block_constraints(o.signs, spec.blocks);
  else spec.constraints.assign(nb, sector::BlockConstraint{});
  if (!o.spread.empty()) {
    std::vector<double> sp;
    for (const auto& t : split(o.spread, ',')) sp.push_back(t == "inf" ? std::numeric_limits<double>::infinity() : std::stod(t));
    if (sp.size() == 1) {
      for (int b = 0; b < nb; ++b)
        if (spec.blocks.dims()[b] > 1) spec.constraints[b].max_log_spread = sp[0];
    } else if (static_cast<int>(sp.size()) == nb) {
      for (int b = 0; b < nb; ++b) spec.constraints[b].max_log_spread = sp[b];
    } else {
      throw std::invalid_argument("--spread: expected one value or one per block");
    }
  }
  if (!o.signature.empty()) {
    const auto sig = cartan::parse_signature(o.signature);
    if (sig.d() != o.d) throw std::invalid_argument("--signature must have p+q = d");
    spec.total_signature = sector::BlockSignature{sig.p, sig.q};
  }
  spec.frame = sector::parse_frame(o.frame, o.d);
  spec.norm = enumerate::parse_norm(o.norm);
  spec.validate();
  return spec;
}

json spec_config(const SpecOptions& o, const sector::SectorSpec& spec) {
  return {{"d", o.d},          {"blocks", spec.blocks.dims()}, {"signs", o.signs},
          {"signature", o.signature}, {"spread", o.spread},  {"frame", o.frame},
          {"norm", enumerate::to_string(spec.norm)}, {"spec", spec.describe()}, {"spec_digest", spec.digest()}};
}

std::string series_csv(const CountSeries& s, const std::vector<std::string>& header, bool exact) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (std::size_t j = 0; j < s.T_grid.size(); ++j) {
    os << fmt(s.T_grid[j]) << ",";
    if (exact) {
      os << static_cast<std::uint64_t>(s.values[j]);
      if (!s.degenerate.empty()) os << "," << static_cast<std::uint64_t>(s.degenerate[j]);
    } else {
      os << fmt(s.values[j]) << "," << fmt(s.stderr_values[j]);
    }
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

void add_predict_exponent(CLI::App& app, Action& selected) {
  auto o = std::make_shared<SpecOptions>();
  auto* sub = app.add_subcommand("predict-exponent", "Predicted growth exponent (a, b) for a block decomposition");
  sub->add_option("--d", o->d, "Dimension")->required();
  sub->add_option("--blocks", o->blocks, "Block dimensions, e.g. 1,1,1");
  sub->add_option("--I", o->I, "Glued simple roots (1-based), alternative to --blocks");
  sub->callback([&selected, o] {
    selected = [o](Context& ctx) {
      rootdata::BlockDecomposition blocks =
          !o->blocks.empty() ? rootdata::BlockDecomposition(parse_index_list(o->blocks))
                             : rootdata::blocks_from_subset(o->d, one_based(o->I, o->d - 1, "--I"));
      if (blocks.d() != o->d) throw std::invalid_argument("--blocks must sum to --d");
      const auto e = rootdata::predict_exponent(blocks);
      ctx.out << json{{"a", rootdata::to_string(e.a)}, {"b", e.b}}.dump() << "\n";
      return 0;
    };
  });
}

void add_kah(CLI::App& app, Action& selected) {
  struct Opts {
    std::string matrix, signature, I, out;
    double c = -1;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("kah", "Cartan decomposition g = k a w h");
  sub->add_option("--matrix", o->matrix, "Matrix file or inline rows 'a,b,c;d,e,f;...'")->required();
  sub->add_option("--signature", o->signature, "Signature p,q")->required();
  sub->add_option("--regularity", o->c, "Report (c, I)-regularity for this c");
  sub->add_option("--I", o->I, "Simple roots (1-based) that must clear c (default: all)");
  sub->add_option("--out", o->out, "Output JSON file (default stdout)");
  sub->callback([&selected, o] {
    selected = [o](Context& ctx) {
      const auto g = parse_matrix(o->matrix);
      const auto sig = cartan::parse_signature(o->signature);
      RunManifest run("kah", ctx.command_line, {{"matrix", o->matrix}, {"signature", o->signature}});
      return run.guard([&] {
        const auto f = cartan::kah_decompose(g, sig);
        const auto r = cartan::invariant_residuals(f);
        json j = {{"signature", {sig.p, sig.q}},
                  {"k", matrix_json(f.k)},
                  {"a", vector_json(f.a)},
                  {"w", f.w},
                  {"h", matrix_json(f.h)},
                  {"margins", vector_json(f.margins)},
                  {"ambiguous", f.ambiguous},
                  {"sweeps", f.sweeps},
                  {"reconstruction_error", num((cartan::reconstruct(f) - g).norm())},
                  {"residuals",
                   {{"orthogonality", num(r.orthogonality)},
                    {"det_k", num(r.det_k)},
                    {"h_form", num(r.h_form)},
                    {"det_h", num(r.det_h)},
                    {"product", num(r.product)}}}};
        if (o->c >= 0) {
          std::vector<int> subset = one_based(o->I, sig.d() - 1, "--I");
          if (o->I.empty())
            for (int s = 0; s + 1 < sig.d(); ++s) subset.push_back(s);
          const auto rep = cartan::regularity(f, o->c, subset);
          json failing = json::array();
          for (int s : rep.failing) failing.push_back(s + 1);
          j["regularity"] = {{"c", num(o->c)},
                             {"classification", rep.classification == cartan::Regularity::regular ? "regular" : "singular"},
                             {"failing", failing}};
        }
        emit(run, ctx, o->out, dump_json(j));
      });
    };
  });
}

void add_wavefront(CLI::App& app, Action& selected) {
  struct Opts {
    std::string signature = "2,1", c_grid, depth_grid, samples = "16", directions = "16", wall_root, coarse_I, w, out;
    double epsilon = 1e-3, h_radius = 0.5;
    std::uint64_t seed = 0;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("wavefront", "Lipschitz sweep of the Cartan factors over (c, depth) cells");
  sub->add_option("--signature", o->signature, "Signature p,q")->capture_default_str();
  sub->add_option("--c-grid", o->c_grid, "Regularity values c")->required();
  sub->add_option("--depth-grid", o->depth_grid, "Depth bin edges")->required();
  sub->add_option("--epsilon", o->epsilon, "Perturbation size")->capture_default_str();
  sub->add_option("--samples", o->samples, "Base points per cell")->capture_default_str();
  sub->add_option("--directions", o->directions, "Tangent directions per base point")->capture_default_str();
  sub->add_option("--seed", o->seed, "RNG seed")->required();
  sub->add_option("--wall-root", o->wall_root, "Simple root (1-based) held at margin c");
  sub->add_option("--coarse-I", o->coarse_I, "Simple roots (1-based) for the coarse probe");
  sub->add_option("--w", o->w, "Sign pattern, e.g. +,+,-");
  sub->add_option("--h-radius", o->h_radius, "Radius of the H component")->capture_default_str();
  sub->add_option("--out", o->out, "Output CSV (default stdout)");
  sub->callback([&selected, o] {
    selected = [o](Context& ctx) {
      wavefront::SweepConfig cfg;
      cfg.signature = cartan::parse_signature(o->signature);
      const int d = cfg.signature.d();
      cfg.c_grid = parse_grid(o->c_grid, "--c-grid");
      cfg.depth_edges = parse_grid(o->depth_grid, "--depth-grid");
      cfg.epsilon = o->epsilon;
      cfg.base_points = static_cast<int>(parse_count(o->samples, "--samples"));
      cfg.directions = static_cast<int>(parse_count(o->directions, "--directions"));
      cfg.seed = o->seed;
      if (!o->wall_root.empty()) {
        const auto r = one_based(o->wall_root, d - 1, "--wall-root");
        if (r.size() != 1) throw std::invalid_argument("--wall-root: expected one index");
        cfg.wall_root = r[0];
      }
      cfg.coarse_subset = one_based(o->coarse_I, d - 1, "--coarse-I");
      for (const auto& t : split(o->w, ',')) {
        if (t == "+") cfg.w.push_back(1);
        else if (t == "-") cfg.w.push_back(-1);
        else if (!t.empty()) throw std::invalid_argument("--w: expected + or -");
      }
      cfg.h_radius = o->h_radius;
      cfg.threads = ctx.threads;
      json config = {{"signature", o->signature}, {"c_grid", num_array(cfg.c_grid)},
                     {"depth_edges", num_array(cfg.depth_edges)}, {"epsilon", num(cfg.epsilon)},
                     {"base_points", cfg.base_points}, {"directions", cfg.directions},
                     {"wall_root", o->wall_root}, {"coarse_I", o->coarse_I}, {"w", o->w},
                     {"h_radius", num(cfg.h_radius)}};
      RunManifest run("wavefront", ctx.command_line, config);
      run.set_seed("seed", cfg.seed);
      if (!o->out.empty() && o->out != "-") run.set_manifest_path(o->out + ".manifest.json");
      return run.guard([&] {
        const auto cells = wavefront::lipschitz_sweep(cfg);
        std::ostringstream os;
        wavefront::write_sweep_csv(os, cells);
        json rejected = json::array();
        for (const auto& c : cells) rejected.push_back(c.rejected);
        run.note("rejected_per_cell", rejected);
        emit(run, ctx, o->out, os.str());
      });
    };
  });
}

void add_enumerate(CLI::App& app, Action& selected) {
  struct Opts {
    int d = 3;
    double T = 0;
    std::string norm = "max", out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("enumerate", "List unimodular integral symmetric forms with norm < T");
  sub->add_option("--d", o->d, "Dimension (2-4)")->capture_default_str();
  sub->add_option("--T", o->T, "Norm bound")->required();
  sub->add_option("--norm", o->norm, "max or frobenius")->capture_default_str();
  sub->add_option("--out", o->out, "Output CSV (default stdout)");
  sub->callback([&selected, o] {
    selected = [o](Context& ctx) {
      enumerate::EnumerateOptions eo{o->d, o->T, enumerate::parse_norm(o->norm), ctx.threads};
      enumerate::validate(eo);
      RunManifest run("enumerate", ctx.command_line,
                      {{"d", o->d}, {"T", num(o->T)}, {"norm", enumerate::to_string(eo.norm)}});
      if (!o->out.empty() && o->out != "-") run.set_manifest_path(o->out + ".manifest.json");
      return run.guard([&] {
        std::ostringstream os;
        for (int i = 0; i < o->d; ++i)
          for (int j = i; j < o->d; ++j) os << "q" << i + 1 << j + 1 << ",";
        os << "det,norm\n";
        std::uint64_t n = 0;
        enumerate::enumerate_forms(eo, [&](const enumerate::QuadraticForm& q) {
          for (int k = 0; k < q.triangle_size(); ++k) os << q.triangle()[k] << ",";
          os << q.det() << "," << fmt(q.norm()) << "\n";
          ++n;
        });
        run.note("forms", n);
        emit(run, ctx, o->out, os.str());
      });
    };
  });
}

void add_count_ball(CLI::App& app, Action& selected) {
  struct Opts {
    int d = 3;
    std::string grid, norm = "max", out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("count-ball", "Count forms with norm < T over a T grid");
  sub->add_option("--d", o->d, "Dimension (2-4)")->capture_default_str();
  sub->add_option("--T-grid", o->grid, "Increasing T values")->required();
  sub->add_option("--norm", o->norm, "max or frobenius")->capture_default_str();
  sub->add_option("--out", o->out, "Output CSV (default stdout)");
  sub->callback([&selected, o] {
    selected = [o](Context& ctx) {
      const auto grid = parse_grid(o->grid, "--T-grid");
      const auto norm = enumerate::parse_norm(o->norm);
      RunManifest run("count-ball", ctx.command_line,
                      {{"d", o->d}, {"T_grid", num_array(grid)}, {"norm", enumerate::to_string(norm)}});
      if (!o->out.empty() && o->out != "-") run.set_manifest_path(o->out + ".manifest.json");
      return run.guard([&] {
        const auto counts = enumerate::count_ball_grid(o->d, grid, norm, ctx.threads);
        std::ostringstream os;
        os << "T,count\n";
        for (std::size_t j = 0; j < grid.size(); ++j) os << fmt(grid[j]) << "," << counts[j] << "\n";
        emit(run, ctx, o->out, os.str());
      });
    };
  });
}

void add_count_sector(CLI::App& app, Action& selected) {
  struct Opts {
    SpecOptions spec;
    std::string grid, out, fit_out;
    int b = 0;
    double tie_tol = sector::default_tie_tol;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("count-sector", "Count forms in a spectral sector over a T grid");
  add_spec_options(sub, o->spec);
  sub->add_option("--T-grid", o->grid, "Increasing T values")->required();
  sub->add_option("--tie-tol", o->tie_tol, "Log-gap below which a form is degenerate")->capture_default_str();
  sub->add_option("--b", o->b, "Fixed log power for the fit (default: predicted)");
  sub->add_option("--out", o->out, "Output CSV (default stdout)");
  sub->add_option("--fit-out", o->fit_out, "Fit report JSON (default <out>.fit.json)");
  sub->callback([&selected, o] {
    selected = [o](Context& ctx) {
      const auto spec = build_spec(o->spec);
      const auto grid = parse_grid(o->grid, "--T-grid");
      const auto pred = rootdata::predict_exponent(spec.blocks);
      const int b = o->b > 0 ? o->b : pred.b;
      json config = spec_config(o->spec, spec);
      config["T_grid"] = num_array(grid);
      config["tie_tol"] = num(o->tie_tol);
      config["b"] = b;
      RunManifest run("count-sector", ctx.command_line, config);
      if (!o->out.empty() && o->out != "-") run.set_manifest_path(o->out + ".manifest.json");
      const std::string fit_path = !o->fit_out.empty() ? o->fit_out : with_suffix(o->out, ".fit.json");
      return run.guard([&] {
        auto counts = sector::count_sectors(o->spec.d, grid, {spec}, ctx.threads, o->tie_tol);
        const auto& s = counts.series.front();
        json ball = json::array();
        for (auto v : counts.ball) ball.push_back(v);
        run.note("ball_counts", ball);
        emit(run, ctx, o->out, series_csv(s, {"T", "count", "degenerate"}, true));
        json fit = fit_report(s, b, pred);
        fit["spec"] = spec.describe();
        if (!fit_path.empty()) run.write(fit_path, dump_json(fit));
        else ctx.err << dump_json(fit);
      });
    };
  });
}

void add_volume(CLI::App& app, Action& selected) {
  struct Opts {
    SpecOptions spec;
    std::string grid, method = "mc", samples = "200000", rotations = "32", out, fit_out;
    double rel_tol = 1e-6, singular = -1;
    std::uint64_t seed = 0;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("volume", "Sector volume series by Monte Carlo or cubature");
  add_spec_options(sub, o->spec);
  sub->add_option("--T-grid", o->grid, "Increasing T values")->required();
  sub->add_option("--method", o->method, "mc or quadrature")->capture_default_str();
  sub->add_option("--samples", o->samples, "Monte Carlo samples per T")->capture_default_str();
  sub->add_option("--rotations", o->rotations, "Frame samples for quadrature")->capture_default_str();
  sub->add_option("--rel-tol", o->rel_tol, "Cubature relative tolerance")->capture_default_str();
  sub->add_option("--singular", o->singular, "Volume within c of a wall outside I instead");
  sub->add_option("--seed", o->seed, "RNG seed")->required();
  sub->add_option("--out", o->out, "Output CSV (default stdout)");
  sub->add_option("--fit-out", o->fit_out, "Fit report JSON (default <out>.fit.json)");
  sub->callback([&selected, o] {
    selected = [o](Context& ctx) {
      const auto spec = build_spec(o->spec);
      const auto grid = parse_grid(o->grid, "--T-grid");
      volume::VolumeOptions vo;
      vo.method = volume::parse_method(o->method);
      vo.seed = o->seed;
      vo.samples = parse_count(o->samples, "--samples");
      vo.rotations = parse_count(o->rotations, "--rotations");
      vo.rel_tol = o->rel_tol;
      vo.threads = ctx.threads;
      json config = spec_config(o->spec, spec);
      config["T_grid"] = num_array(grid);
      config["method"] = o->method;
      config["samples"] = vo.samples;
      config["rotations"] = vo.rotations;
      config["rel_tol"] = num(vo.rel_tol);
      if (o->singular >= 0) config["singular_c"] = num(o->singular);
      RunManifest run("volume", ctx.command_line, config);
      run.set_seed("seed", vo.seed);
      if (!o->out.empty() && o->out != "-") run.set_manifest_path(o->out + ".manifest.json");
      const std::string fit_path = !o->fit_out.empty() ? o->fit_out : with_suffix(o->out, ".fit.json");
      return run.guard([&] {
        const auto s = o->singular >= 0 ? volume::singular_volume(spec, o->singular, grid, vo)
                                        : volume::volume_series(spec, grid, vo);
        run.note("series", s.manifest);
        emit(run, ctx, o->out, series_csv(s, {"T", "volume", "stderr"}, false));
        const auto pred = rootdata::predict_exponent(spec.blocks);
        json fit = fit_report(s, pred.b, pred);
        fit["spec"] = spec.describe();
        if (!fit_path.empty()) run.write(fit_path, dump_json(fit));
        else ctx.err << dump_json(fit);
      });
    };
  });
}

struct Series2 {
  std::vector<double> T, v;
};

Series2 load_series(const std::string& path, const std::vector<std::string>& value_columns) {
  const auto t = read_csv(path);
  const int tc = t.column("T");
  if (tc < 0) throw std::invalid_argument(path + ": no T column");
  int vc = -1;
  for (const auto& name : value_columns)
    if ((vc = t.column(name)) >= 0) break;
  if (vc < 0) throw std::invalid_argument(path + ": no value column");
  return {t.numeric(tc), t.numeric(vc)};
}

void add_fit(CLI::App& app, Action& selected) {
  struct Opts {
    std::string in, column, out;
    int b = 1;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("fit", "Fit N(T) ~ c T^a (log T)^(b-1) to a series");
  sub->add_option("--in", o->in, "CSV with a T column")->required();
  sub->add_option("--b", o->b, "Fixed log power")->capture_default_str();
  sub->add_option("--column", o->column, "Value column (default: count, volume or value)");
  sub->add_option("--out", o->out, "Output JSON (default stdout)");
  sub->callback([&selected, o] {
    selected = [o](Context& ctx) {
      const auto s = o->column.empty() ? load_series(o->in, {"count", "volume", "value"})
                                       : load_series(o->in, {o->column});
      RunManifest run("fit", ctx.command_line, {{"in", o->in}, {"b", o->b}, {"column", o->column}});
      return run.guard([&] {
        json j = to_json(fit_exponent(s.T, s.v, o->b));
        j["tail_slope"] = num(tail_slope(s.T, s.v));
        emit(run, ctx, o->out, dump_json(j));
      });
    };
  });
}

double local_slope(const Series2& s, std::size_t j) {
  if (j == 0 || !(s.v[j] > 0) || !(s.v[j - 1] > 0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log(s.v[j] / s.v[j - 1]) / std::log(s.T[j] / s.T[j - 1]);
}

void add_report(CLI::App& app, Action& selected) {
  struct Opts {
    std::string counts, volumes, out, svg;
    int b = 1;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("report", "Compare a count series with a volume series");
  sub->add_option("--counts", o->counts, "Count CSV (T, count)")->required();
  sub->add_option("--volumes", o->volumes, "Volume CSV (T, volume)")->required();
  sub->add_option("--b", o->b, "Fixed log power for both fits")->capture_default_str();
  sub->add_option("--out", o->out, "Comparison table CSV (default stdout)");
  sub->add_option("--svg", o->svg, "Optional log-log plot");
  sub->callback([&selected, o] {
    selected = [o](Context& ctx) {
      const auto c = load_series(o->counts, {"count", "value"});
      const auto v = load_series(o->volumes, {"volume", "value"});
      Series2 cj, vj;
      for (std::size_t i = 0; i < c.T.size(); ++i)
        for (std::size_t k = 0; k < v.T.size(); ++k)
          if (std::abs(c.T[i] - v.T[k]) <= 1e-9 * std::max(1.0, std::abs(c.T[i]))) {
            cj.T.push_back(c.T[i]);
            cj.v.push_back(c.v[i]);
            vj.T.push_back(v.T[k]);
            vj.v.push_back(v.v[k]);
          }
      if (cj.T.empty()) throw std::invalid_argument("report: the series share no T values");
      RunManifest run("report", ctx.command_line, {{"counts", o->counts}, {"volumes", o->volumes}, {"b", o->b}});
      return run.guard([&] {
        std::ostringstream os;
        os << "T,count,volume,slope_count,slope_volume,slope_difference\n";
        for (std::size_t j = 0; j < cj.T.size(); ++j) {
          const double sc = local_slope(cj, j), sv = local_slope(vj, j);
          os << fmt(cj.T[j]) << "," << fmt(cj.v[j]) << "," << fmt(vj.v[j]) << ",";
          if (j > 0) os << fmt(sc) << "," << fmt(sv) << "," << fmt(sc - sv);
          else os << ",,";
          os << "\n";
        }
        const double tc = tail_slope(cj.T, cj.v), tv = tail_slope(vj.T, vj.v);
        os << "# tail_slope_count=" << fmt(tc) << "\n";
        os << "# tail_slope_volume=" << fmt(tv) << "\n";
        os << "# tail_slope_difference=" << fmt(tc - tv) << "\n";
        try {
          const double fc = fit_exponent(cj.T, cj.v, o->b).a_hat;
          const double fv = fit_exponent(vj.T, vj.v, o->b).a_hat;
          os << "# fit_a_count=" << fmt(fc) << "\n";
          os << "# fit_a_volume=" << fmt(fv) << "\n";
          os << "# fit_a_difference=" << fmt(fc - fv) << "\n";
        } catch (const std::invalid_argument&) {
          os << "# fit=insufficient data\n";
        }
        emit(run, ctx, o->out, os.str());
        if (!o->svg.empty()) {
          // rescale volumes onto the count curve at the last shared T
          PlotSeries pc{"count", "#1f77b4", cj.T, cj.v};
          PlotSeries pv{"volume (scaled)", "#d62728", vj.T, vj.v};
          const double last_c = cj.v.back(), last_v = vj.v.back();
          if (last_c > 0 && last_v > 0)
            for (double& y : pv.y) y *= last_c / last_v;
          run.write(o->svg, loglog_svg("count vs volume", {pc, pv}));
        }
      });
    };
  });
}

}  // namespace

void register_commands(CLI::App& app, Action& selected) {
  add_predict_exponent(app, selected);
  add_kah(app, selected);
  add_wavefront(app, selected);
  add_enumerate(app, selected);
  add_count_ball(app, selected);
  add_count_sector(app, selected);
  add_volume(app, selected);
  add_fit(app, selected);
  add_report(app, selected);
}

}  // namespace symcount::cli
