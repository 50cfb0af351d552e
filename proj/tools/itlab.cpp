#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "itlab/bounds.hpp"
#include "itlab/entropy.hpp"
#include "itlab/io.hpp"
#include "itlab/sweep.hpp"

namespace {

using nlohmann::json;
using namespace itlab;

// Entropies are displayed at 1e-9 precision.
double round9(double v) { return std::round(v * 1e9) / 1e9; }

json matrix_rows(const IntMatrix& mat) {
  json rows = json::array();
  for (int i = 0; i < mat.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < mat.cols; ++j) row.push_back(mat.at(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

void print_json(const json& doc) { std::cout << doc.dump(2) << "\n"; }

void write_or_print(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
}

struct ParamOpts {
  int m = 1;
  int r = 1;
  std::int64_t q = 2;
  std::string semiring = "integer";

  ModelParams params() const {
    ModelParams p{m, r, q, semiring_from_string(semiring)};
    p.validate();
    return p;
  }
};

void add_param_opts(CLI::App* cmd, ParamOpts& opts, bool with_m = true) {
  if (with_m) cmd->add_option("--m", opts.m, "matrix side length")->required();
  cmd->add_option("--r", opts.r, "rank parameter")->required();
  cmd->add_option("--q", opts.q, "alphabet size")->required();
  cmd->add_option("--semiring", opts.semiring, "integer|modq")->default_val("integer");
}

json entropy_report_json(const EntropyReport& rep) {
  return {{"value_bits", round9(rep.value_bits)},
          {"support_size", rep.support_size},
          {"exact", rep.exact},
          {"method", rep.method}};
}

json bound_report_json(const BoundReport& rep) {
  return {{"formula", rep.formula},
          {"inputs", rep.inputs},
          {"bound_value", rep.bound_value},
          {"ceil_value", rep.ceil_value},
          {"clamped", rep.clamped}};
}

std::string csv_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// One row of the `bounds table` CSV; blank fields where a column does not
// apply to the formula.
struct TableRow {
  std::string formula, m, r, q, pe, d, beta, delta, hstar, unit, bound, ceil, clamped;

  std::string line() const {
    return formula + ',' + m + ',' + r + ',' + q + ',' + pe + ',' + d + ',' + beta + ',' +
           delta + ',' + hstar + ',' + unit + ',' + bound + ',' + ceil + ',' + clamped;
  }
};

std::string bounds_table_csv(const std::string& spec_text) {
  json doc = json::parse(spec_text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError("bounds table: malformed JSON");
  if (!doc.is_array()) throw ValidationError("bounds table: top level must be an array");

  std::string csv = "formula,m,r,q,pe,D,beta,delta,hstar,unit,bound_value,ceil_value,clamped\n";
  for (const json& entry : doc) {
    if (!entry.is_object() || !entry.contains("formula") || !entry["formula"].is_string()) {
      throw ValidationError("bounds table: each entry needs a string formula");
    }
    const std::string formula = entry["formula"].get<std::string>();
    auto require_keys = [&](std::initializer_list<const char*> keys) {
      for (const char* k : keys) {
        if (!entry.contains(k)) {
          throw ValidationError("bounds table: " + formula + " entry missing key " + k);
        }
      }
      for (const auto& item : entry.items()) {
        bool known = item.key() == "formula" || item.key() == "unit";
        for (const char* k : keys) known = known || item.key() == k;
        if (!known) {
          throw ValidationError("bounds table: unknown key \"" + item.key() + "\" in " +
                                formula + " entry");
        }
      }
    };
    // delta defaults to the bit scale like the hamming subcommand; the
    // gaussian formula is natural-log native.
    const LogUnit unit = entry.contains("unit")
                             ? log_unit_from_string(entry["unit"].get<std::string>())
                             : (formula == "gaussian" ? LogUnit::Nats : LogUnit::Bits);
    if (formula == "fano") {
      require_keys({"m", "r", "q", "pe"});
      ConverseInput inp{entry["m"].get<int>(), entry["r"].get<int>(),
                        entry["q"].get<std::int64_t>(), entry["pe"].get<double>()};
      const BoundReport rep = fano_min_samples(inp);
      TableRow row;
      row.formula = rep.formula;
      row.m = std::to_string(inp.m);
      row.r = std::to_string(inp.r);
      row.q = std::to_string(inp.q);
      row.pe = csv_num(inp.pe);
      row.bound = csv_num(rep.bound_value);
      row.ceil = csv_num(rep.ceil_value);
      row.clamped = rep.clamped ? "true" : "false";
      csv += row.line() + "\n";
    } else if (formula == "hamming") {
      require_keys({"m", "r", "q", "D", "beta", "delta"});
      DistortionInput inp;
      inp.m = entry["m"].get<int>();
      inp.r = entry["r"].get<int>();
      inp.q = entry["q"].get<std::int64_t>();
      inp.d_level = entry["D"].get<double>();
      inp.beta_exp = entry["beta"].get<double>();
      inp.delta_slack = entry["delta"].get<double>();
      inp.unit = unit;
      const BoundReport rep = hamming_rd_min_samples(inp);
      TableRow row;
      row.formula = rep.formula;
      row.m = std::to_string(inp.m);
      row.r = std::to_string(inp.r);
      row.q = std::to_string(inp.q);
      row.d = csv_num(inp.d_level);
      row.beta = csv_num(inp.beta_exp);
      row.delta = csv_num(inp.delta_slack);
      row.unit = to_string(inp.unit);
      row.bound = csv_num(rep.bound_value);
      row.ceil = csv_num(rep.ceil_value);
      row.clamped = rep.clamped ? "true" : "false";
      csv += row.line() + "\n";
    } else if (formula == "gaussian") {
      require_keys({"m", "r", "D", "beta", "hstar"});
      DistortionInput inp;
      inp.m = entry["m"].get<int>();
      inp.r = entry["r"].get<int>();
      inp.d_level = entry["D"].get<double>();
      inp.beta_exp = entry["beta"].get<double>();
      inp.h_star = entry["hstar"].get<double>();
      inp.unit = unit;
      const GaussianBoundReport rep = gaussian_rd_info_bound(inp);
      for (int variant = 0; variant < 2; ++variant) {
        TableRow row;
        row.formula = variant == 0 ? "gaussian-paper" : "gaussian-derivation";
        row.m = std::to_string(inp.m);
        row.r = std::to_string(inp.r);
        row.d = csv_num(inp.d_level);
        row.beta = csv_num(inp.beta_exp);
        row.hstar = csv_num(inp.h_star);
        row.unit = to_string(inp.unit);
        const double value = variant == 0 ? rep.variant_paper : rep.variant_derivation;
        row.bound = rep.infinite ? "inf" : csv_num(value);
        const bool clamped = variant == 0 ? rep.clamped_paper : rep.clamped_derivation;
        row.clamped = clamped ? "true" : "false";
        csv += row.line() + "\n";
      }
    } else {
      throw ValidationError("bounds table: unknown formula \"" + formula + "\"");
    }
  }
  return csv;
}

int run(int argc, char** argv) {
  CLI::App app{"low-rank completion laboratory: exact decoding, entropy and bound calculators"};
  app.require_subcommand(1);

  // ---- gen ----------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a random instance (u, v, s = u*v)");
  ParamOpts gen_p;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  add_param_opts(gen, gen_p);
  gen->add_option("--seed", gen_seed, "master seed")->default_val(0);
  gen->add_option("--out", gen_out, "output file (stdout when omitted)");
  gen->callback([&] {
    const Instance inst = make_instance(gen_p.params(), SeedSpec{gen_seed, 0});
    write_or_print(gen_out, instance_to_json(inst));
  });

  // ---- sample -------------------------------------------------------
  auto* sample = app.add_subcommand("sample", "sample n distinct cells of an m x m grid");
  int sample_m = 1, sample_n = 0;
  std::uint64_t sample_seed = 0;
  std::string sample_out;
  sample->add_option("--m", sample_m, "grid side length")->required();
  sample->add_option("--n", sample_n, "number of cells")->required();
  sample->add_option("--seed", sample_seed, "master seed")->default_val(0);
  sample->add_option("--out", sample_out, "output file (stdout when omitted)");
  sample->callback([&] {
    const LocationSequence locs = sample_locations(sample_m, sample_n, SeedSpec{sample_seed, 0});
    write_or_print(sample_out, locations_to_json(locs));
  });

  // ---- decode -------------------------------------------------------
  auto* decode_cmd = app.add_subcommand("decode", "enumerate the consistent set of an instance");
  std::string dec_instance, dec_locs;
  int dec_n = -1;
  std::uint64_t dec_seed = 0, dec_budget = kDefaultEnumBudget;
  decode_cmd->add_option("--instance", dec_instance, "instance JSON file")->required();
  auto* dec_locs_opt = decode_cmd->add_option("--locs", dec_locs, "locations JSON file");
  auto* dec_n_opt =
      decode_cmd->add_option("--n", dec_n, "sample n locations instead of reading a file");
  decode_cmd->add_option("--seed", dec_seed, "seed for --n sampling")->default_val(0);
  decode_cmd->add_option("--budget", dec_budget, "factor-pair enumeration budget");
  dec_locs_opt->excludes(dec_n_opt);
  dec_n_opt->excludes(dec_locs_opt);
  decode_cmd->callback([&] {
    const Instance inst = instance_from_json(read_text_file(dec_instance));
    LocationSequence locs;
    if (!dec_locs.empty()) {
      locs = locations_from_json(read_text_file(dec_locs));
    } else if (dec_n >= 0) {
      locs = sample_locations(inst.params.m, dec_n, SeedSpec{dec_seed, 0});
    } else {
      throw ValidationError("decode: give --locs FILE or --n INT");
    }
    const DecodeOutcome out = decode(observe(inst.s, locs), inst.params, dec_budget);
    print_json({{"kind", out.kind == DecodeKind::Unique ? "unique" : "ambiguous"},
                {"consistent_count", out.consistent_count},
                {"n", locs.size()},
                {"reconstruction", matrix_rows(out.reconstruction)},
                {"matches_truth", out.reconstruction == inst.s}});
  });

  // ---- pe -----------------------------------------------------------
  auto* pe_cmd = app.add_subcommand("pe", "decoding error probability at fixed n");
  ParamOpts pe_p;
  int pe_n = 0;
  std::string pe_mode = "exact";
  std::uint64_t pe_trials = 1000, pe_seed = 0;
  std::uint64_t pe_budget = kDefaultEnumBudget, pe_loc_budget = kDefaultLocationBudget;
  add_param_opts(pe_cmd, pe_p);
  pe_cmd->add_option("--n", pe_n, "observed cell count")->required();
  pe_cmd->add_option("--mode", pe_mode, "exact|mc")->default_val("exact");
  pe_cmd->add_option("--trials", pe_trials, "mc trial count")->default_val(1000);
  pe_cmd->add_option("--seed", pe_seed, "mc master seed")->default_val(0);
  pe_cmd->add_option("--budget", pe_budget, "factor-pair enumeration budget");
  pe_cmd->add_option("--location-budget", pe_loc_budget, "location-subset budget (exact mode)");
  pe_cmd->callback([&] {
    const ModelParams params = pe_p.params();
    ErrorRateReport rep;
    if (pe_mode == "exact") {
      rep = exact_error_rate(params, pe_n, pe_budget, pe_loc_budget);
    } else if (pe_mode == "mc") {
      rep = mc_error_rate(params, pe_n, pe_trials, SeedSpec{pe_seed, 0}, pe_budget);
    } else {
      throw ValidationError("pe: mode must be exact or mc");
    }
    print_json({{"m", params.m},
                {"r", params.r},
                {"q", params.q},
                {"semiring", to_string(params.semiring)},
                {"n", rep.n},
                {"mode", to_string(rep.mode)},
                {"pe", rep.pe},
                {"trials", rep.trials},
                {"failures", rep.failures},
                {"pair_count", rep.pair_count},
                {"subset_count", rep.subset_count},
                {"ci95_lo", rep.ci95_lo},
                {"ci95_hi", rep.ci95_hi}});
  });

  // ---- coverage -----------------------------------------------------
  auto* cov = app.add_subcommand("coverage", "row/column coverage failure at n = ceil(a m ln m)");
  int cov_m = 1, cov_r = 1;
  double cov_alpha = 3;
  std::uint64_t cov_trials = 10000, cov_seed = 0;
  bool cov_json = false;
  cov->add_option("--m", cov_m, "grid side length")->required();
  cov->add_option("--r", cov_r, "required entries per row and column")->required();
  cov->add_option("--alpha", cov_alpha, "sampling rate multiplier")->required();
  cov->add_option("--trials", cov_trials, "Monte Carlo trials")->default_val(10000);
  cov->add_option("--seed", cov_seed, "master seed")->default_val(0);
  cov->add_flag("--json", cov_json, "emit JSON instead of text");
  cov->callback([&] {
    const BinsReport rep = coverage_failure_report(cov_m, cov_r, cov_alpha, cov_trials,
                                                   SeedSpec{cov_seed, 0});
    if (cov_json) {
      print_json({{"m", rep.m},
                  {"r", rep.r},
                  {"alpha", rep.alpha},
                  {"n_used", rep.n_used},
                  {"exact_marginal_tail", rep.exact_marginal_tail},
                  {"chernoff_bound", rep.chernoff_bound},
                  {"chernoff_paper_simple", rep.chernoff_paper_simple},
                  {"paper_bound", rep.paper_bound},
                  {"mc_estimate", rep.mc_estimate},
                  {"mc_ci95_lo", rep.mc_ci95_lo},
                  {"mc_ci95_hi", rep.mc_ci95_hi},
                  {"trials", rep.trials}});
    } else {
      std::printf("m = %d  r = %d  alpha = %g  n_used = %d\n", rep.m, rep.r, rep.alpha,
                  rep.n_used);
      std::printf("exact_marginal_tail   = %.6e\n", rep.exact_marginal_tail);
      std::printf("chernoff_bound        = %.6e\n", rep.chernoff_bound);
      std::printf("chernoff_paper_simple = %.6e\n", rep.chernoff_paper_simple);
      std::printf("paper_bound           = %.6e\n", rep.paper_bound);
      std::printf("mc_estimate           = %.6e  [%.6e, %.6e]  (%llu trials)\n",
                  rep.mc_estimate, rep.mc_ci95_lo, rep.mc_ci95_hi,
                  static_cast<unsigned long long>(rep.trials));
    }
  });

  // ---- entropy ------------------------------------------------------
  auto* ent = app.add_subcommand("entropy", "exact enumeration-based entropy checks");
  ent->require_subcommand(1);

  auto* ent_source = ent->add_subcommand("source", "H(S) of the induced product distribution");
  ParamOpts es_p;
  std::uint64_t es_budget = kDefaultEnumBudget;
  bool es_given_v = false;
  add_param_opts(ent_source, es_p);
  ent_source->add_option("--budget", es_budget, "factor-pair enumeration budget");
  ent_source->add_flag("--given-v", es_given_v, "also report H(S|V) and the full-rank split");
  ent_source->callback([&] {
    const ModelParams params = es_p.params();
    json doc = entropy_report_json(exact_source_entropy(params, es_budget));
    if (es_given_v) {
      const ConditionalSourceEntropy cond = conditional_source_entropy_given_v(params, es_budget);
      doc["h_total_bits"] = round9(cond.h_total_bits);
      doc["h_given_fullrank_v_bits"] = round9(cond.h_given_fullrank_v_bits);
      doc["prob_v_fullrank"] = cond.prob_v_fullrank;
    }
    print_json(doc);
  });

  auto* ent_obs = ent->add_subcommand("obs", "H of the values revealed at a location set");
  ParamOpts eo_p;
  std::string eo_locs;
  std::uint64_t eo_budget = kDefaultEnumBudget;
  add_param_opts(ent_obs, eo_p);
  ent_obs->add_option("--locs", eo_locs, "locations JSON file")->required();
  ent_obs->add_option("--budget", eo_budget, "factor-pair enumeration budget");
  ent_obs->callback([&] {
    const LocationSequence locs = locations_from_json(read_text_file(eo_locs));
    print_json(entropy_report_json(observation_entropy(eo_p.params(), locs, eo_budget)));
  });

  auto* ent_lemma = ent->add_subcommand(
      "lemma32", "conditional entropy of the last row functional of a random square system");
  ParamOpts el_p;
  std::uint64_t el_budget = kDefaultEnumBudget;
  add_param_opts(ent_lemma, el_p, /*with_m=*/false);
  ent_lemma->add_option("--budget", el_budget, "state enumeration budget");
  ent_lemma->callback([&] {
    const Lemma32Report rep = lemma32_conditional_entropy(
        el_p.r, el_p.q, semiring_from_string(el_p.semiring), el_budget);
    json doc = entropy_report_json(rep.entropy);
    doc["bound_bits"] = round9(rep.bound_bits);
    doc["holds"] = rep.holds;
    print_json(doc);
  });

  auto* ent_agree = ent->add_subcommand(
      "agreement", "probability that a fresh source matches an observation");
  std::string ea_instance, ea_locs;
  std::uint64_t ea_budget = kDefaultEnumBudget;
  ent_agree->add_option("--instance", ea_instance, "instance JSON file")->required();
  ent_agree->add_option("--locs", ea_locs, "locations JSON file")->required();
  ent_agree->add_option("--budget", ea_budget, "factor-pair enumeration budget");
  ent_agree->callback([&] {
    const Instance inst = instance_from_json(read_text_file(ea_instance));
    const LocationSequence locs = locations_from_json(read_text_file(ea_locs));
    const Observation obs = observe(inst.s, locs);
    print_json({{"probability", agreement_probability(obs, inst.params, ea_budget)},
                {"n", locs.size()}});
  });

  auto* ent_fano = ent->add_subcommand("fano", "H(S|observation) against the Fano bound");
  ParamOpts ef_p;
  std::string ef_locs;
  std::uint64_t ef_budget = kDefaultEnumBudget;
  add_param_opts(ent_fano, ef_p);
  ent_fano->add_option("--locs", ef_locs, "locations JSON file")->required();
  ent_fano->add_option("--budget", ef_budget, "factor-pair enumeration budget");
  ent_fano->callback([&] {
    const LocationSequence locs = locations_from_json(read_text_file(ef_locs));
    const FanoCheck check = fano_verify(ef_p.params(), locs, ef_budget);
    print_json({{"h_s_given_obs_bits", round9(check.h_s_given_obs_bits)},
                {"pe", check.pe},
                {"support_size", check.support_size},
                {"fano_rhs_bits", round9(check.fano_rhs_bits)},
                {"holds", check.holds}});
  });

  // ---- bounds -------------------------------------------------------
  auto* bounds_cmd = app.add_subcommand("bounds", "closed-form sample-count and rate bounds");
  bounds_cmd->require_subcommand(1);

  auto* b_fano = bounds_cmd->add_subcommand("fano", "lossless converse sample-count bound");
  ParamOpts bf_p;
  double bf_pe = 0;
  add_param_opts(b_fano, bf_p);
  b_fano->add_option("--pe", bf_pe, "tolerated error probability")->required();
  b_fano->callback([&] {
    print_json(bound_report_json(fano_min_samples({bf_p.m, bf_p.r, bf_p.q, bf_pe})));
  });

  auto* b_ham = bounds_cmd->add_subcommand("hamming", "Hamming-distortion sample-count bound");
  ParamOpts bh_p;
  double bh_d = 0, bh_beta = 1, bh_delta = 0;
  std::string bh_unit = "bits";
  bool bh_exact_hs = false;
  std::uint64_t bh_budget = kDefaultEnumBudget;
  add_param_opts(b_ham, bh_p);
  b_ham->add_option("--D", bh_d, "tolerated average distortion level")->required();
  b_ham->add_option("--beta", bh_beta, "distortion exponent in D*m^beta")->default_val(1.0);
  auto* bh_delta_opt =
      b_ham->add_option("--delta", bh_delta, "entropy slack in 2rm(log q - delta)");
  b_ham->add_option("--unit", bh_unit, "bits|nats for delta")->default_val("bits");
  auto* bh_exact_opt = b_ham->add_flag("--exact-hs", bh_exact_hs,
                                       "derive delta from the exact source entropy");
  b_ham->add_option("--budget", bh_budget, "enumeration budget for --exact-hs");
  bh_exact_opt->excludes(bh_delta_opt);
  b_ham->callback([&] {
    DistortionInput inp;
    inp.m = bh_p.m;
    inp.r = bh_p.r;
    inp.q = bh_p.q;
    inp.d_level = bh_d;
    inp.beta_exp = bh_beta;
    inp.delta_slack = bh_delta;
    inp.unit = log_unit_from_string(bh_unit);
    json extra;
    if (bh_exact_hs) {
      const ModelParams params = bh_p.params();
      const EntropyReport h_s = exact_source_entropy(params, bh_budget);
      const double delta_bits =
          std::log2(static_cast<double>(bh_p.q)) -
          h_s.value_bits / (2.0 * bh_p.r * bh_p.m);
      inp.delta_slack = delta_bits;
      inp.unit = LogUnit::Bits;
      extra["delta_from_exact_hs"] = delta_bits;
      extra["h_s_bits"] = h_s.value_bits;
    }
    json doc = bound_report_json(hamming_rd_min_samples(inp));
    for (const auto& item : extra.items()) doc[item.key()] = item.value();
    print_json(doc);
  });

  auto* b_gauss = bounds_cmd->add_subcommand("gaussian",
                                             "continuous squared-error information bound");
  int bg_m = 1, bg_r = 1;
  double bg_d = 0, bg_beta = 1, bg_hstar = 0;
  std::string bg_unit = "nats";
  b_gauss->add_option("--m", bg_m, "matrix side length")->required();
  b_gauss->add_option("--r", bg_r, "rank parameter")->required();
  b_gauss->add_option("--D", bg_d, "squared-error level in D*m^beta")->required();
  b_gauss->add_option("--beta", bg_beta, "distortion exponent")->default_val(1.0);
  b_gauss->add_option("--hstar", bg_hstar, "differential entropy rate of the source")
      ->required();
  b_gauss->add_option("--unit", bg_unit, "bits|nats")->default_val("nats");
  b_gauss->callback([&] {
    DistortionInput inp;
    inp.m = bg_m;
    inp.r = bg_r;
    inp.d_level = bg_d;
    inp.beta_exp = bg_beta;
    inp.h_star = bg_hstar;
    inp.unit = log_unit_from_string(bg_unit);
    const GaussianBoundReport rep = gaussian_rd_info_bound(inp);
    json doc{{"formula", rep.formula},
             {"inputs", rep.inputs},
             {"infinite", rep.infinite},
             {"unit", to_string(rep.unit)}};
    if (!rep.infinite) {
      doc["variant_paper"] = rep.variant_paper;
      doc["variant_derivation"] = rep.variant_derivation;
      doc["clamped_paper"] = rep.clamped_paper;
      doc["clamped_derivation"] = rep.clamped_derivation;
    }
    print_json(doc);
  });

  auto* b_table = bounds_cmd->add_subcommand("table", "evaluate a JSON list of bound inputs");
  std::string bt_spec, bt_out;
  b_table->add_option("--sweep", bt_spec, "JSON file with bound entries")->required();
  b_table->add_option("--out", bt_out, "CSV output file (stdout when omitted)");
  b_table->callback([&] { write_or_print(bt_out, bounds_table_csv(read_text_file(bt_spec))); });

  // ---- sweep --------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "run a configured sweep and emit CSV + SVG");
  std::string sw_config, sw_out_dir, sw_x = "n", sw_y = "pe_hat";
  bool sw_logy = false;
  double sw_threshold = -1;
  sweep_cmd->add_option("--config", sw_config, "sweep config JSON file")->required();
  sweep_cmd->add_option("--out", sw_out_dir, "output directory")->required();
  sweep_cmd->add_option("--x", sw_x, "SVG x field")->default_val("n");
  sweep_cmd->add_option("--y", sw_y, "SVG y field")->default_val("pe_hat");
  sweep_cmd->add_flag("--logy", sw_logy, "log-scale y axis");
  sweep_cmd->add_option("--threshold-pe", sw_threshold,
                        "also write threshold.json at this target pe");
  sweep_cmd->callback([&] {
    const SweepConfig config = sweep_config_from_json(read_text_file(sw_config));
    std::error_code ec;
    std::filesystem::create_directories(sw_out_dir, ec);
    if (ec) throw IoError("cannot create directory " + sw_out_dir + ": " + ec.message());
    const std::vector<ResultRow> rows = run_sweep(config);
    const std::string csv_path = (std::filesystem::path(sw_out_dir) / config.csv_name).string();
    const std::string svg_path = (std::filesystem::path(sw_out_dir) / config.svg_name).string();
    emit_csv(rows, csv_path);
    emit_svg_curve(rows, sw_x, sw_y, svg_path, sw_logy);
    std::cout << "rows: " << rows.size() << "\ncsv: " << csv_path << "\nsvg: " << svg_path
              << "\n";
    if (sw_threshold >= 0) {
      const ThresholdTable table = threshold_estimate(rows, sw_threshold);
      json entries = json::array();
      for (const ThresholdEntry& e : table.entries) {
        entries.push_back({{"m", e.point.m},
                           {"r", e.point.r},
                           {"q", e.point.q},
                           {"semiring", to_string(e.point.semiring)},
                           {"n_star", e.n_star},
                           {"ref_linear", e.ref_linear},
                           {"ref_mlogm", e.ref_mlogm}});
      }
      const json doc{{"target_pe", sw_threshold},
                     {"c_linear", table.c_linear},
                     {"c_mlogm", table.c_mlogm},
                     {"entries", entries}};
      const std::string thr_path =
          (std::filesystem::path(sw_out_dir) / "threshold.json").string();
      write_text_file(thr_path, doc.dump(2) + "\n");
      std::cout << "threshold: " << thr_path << "\n";
    }
  });

  // ---- plot ---------------------------------------------------------
  auto* plot = app.add_subcommand("plot", "render a sweep CSV as an SVG chart");
  std::string pl_csv, pl_x = "n", pl_y = "pe_hat", pl_out;
  bool pl_logy = false;
  plot->add_option("--csv", pl_csv, "sweep CSV file")->required();
  plot->add_option("--x", pl_x, "x field")->default_val("n");
  plot->add_option("--y", pl_y, "y field")->default_val("pe_hat");
  plot->add_option("--out", pl_out, "SVG output file")->required();
  plot->add_flag("--logy", pl_logy, "log-scale y axis");
  plot->callback([&] {
    emit_svg_curve(rows_from_csv(read_text_file(pl_csv)), pl_x, pl_y, pl_out, pl_logy);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NoCrossing& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
