#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include "secrec/assistant.hpp"
#include "secrec/calibrate.hpp"
#include "secrec/catalog.hpp"
#include "secrec/dsl.hpp"
#include "secrec/error.hpp"
#include "secrec/evaluate.hpp"
#include "secrec/lint.hpp"
#include "secrec/maut.hpp"
#include "secrec/payload.hpp"
#include "secrec/service.hpp"
#include "secrec/snapshot.hpp"
#include "secrec/solver.hpp"
#include "secrec/wizard.hpp"

namespace secrec::cli {
namespace {

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

/// Loads a KB file together with any child KBs it references.
std::pair<std::shared_ptr<const KbCatalog>, std::shared_ptr<const KnowledgeBase>> load_kb(const std::string& file) {
  auto catalog = std::make_shared<const KbCatalog>(KbCatalog::load_file(file));
  auto id = catalog->id_for_file(file);
  return {catalog, catalog->get(*id)};
}

void print_conflict(std::ostream& out, const ConflictDiagnosis& diag) {
  out << "No pattern is feasible in this context.\n";
  out << "Minimal conflicting answers:";
  if (diag.conflict.empty()) out << " none";
  for (const auto& [p, v] : diag.conflict) out << ' ' << p << '=' << v;
  out << '\n';
  for (const auto& [fid, msg] : diag.messages) out << "  " << fid << (msg.empty() ? "" : ": " + msg) << '\n';
  if (!diag.unconditional_filters.empty()) {
    out << "Filters active in every context:";
    for (const auto& f : diag.unconditional_filters) out << ' ' << f;
    out << '\n';
  }
}

void print_table(std::ostream& out, const KnowledgeBase& kb, const Ranking& ranking, const Explanation& explanation) {
  std::size_t width = 7;
  for (const auto& sp : ranking.ranked) width = std::max(width, sp.pattern_id.size());
  out << std::fixed << std::setprecision(4);
  out << "weights:";
  for (const auto& c : kb.criteria) out << ' ' << c.id << '=' << ranking.weights.weights.at(c.id);
  out << "  (rules fired:";
  if (ranking.weights.fired_rules.empty()) out << " none";
  for (const auto& r : ranking.weights.fired_rules) out << ' ' << r;
  out << ")\n\n";
  out << std::left << std::setw(6) << "rank" << std::setw(static_cast<int>(width + 2)) << "pattern" << std::setw(8)
      << "score";
  for (const auto& c : kb.criteria) out << "  " << std::setw(static_cast<int>(std::max<std::size_t>(c.id.size(), 6))) << c.id;
  out << '\n';
  std::size_t r = 1;
  for (const auto& sp : ranking.ranked) {
    out << std::setw(6) << r++ << std::setw(static_cast<int>(width + 2)) << sp.pattern_id << std::setw(8) << sp.score;
    for (const auto& c : kb.criteria) {
      out << "  " << std::setw(static_cast<int>(std::max<std::size_t>(c.id.size(), 6))) << sp.contributions.at(c.id).product;
    }
    out << '\n';
  }
  out << std::right;
  for (const auto& ex : explanation.excluded) {
    for (const auto& [fid, msg] : ex.violated) {
      out << "excluded " << ex.pattern_id << " by " << fid << (msg.empty() ? "" : ": " + msg) << '\n';
    }
  }
}

int cmd_recommend(Streams io, const std::string& kb_file, const std::string& ctx_file, bool json) {
  auto [catalog, kb] = load_kb(kb_file);
  auto parsed = load_context_file(ctx_file);
  check_context_against(*kb, parsed);
  auto violated = check_context(*kb, parsed.context);
  if (!violated.empty()) {
    std::string ids;
    for (const auto& v : violated) ids += " " + v;
    throw Error(ErrorCode::ContextViolation, "context violates contextual constraints:" + ids);
  }
  if (filter_patterns(*kb, parsed.context).feasible.empty()) {
    auto diag = diagnose_conflict(*kb, parsed.ordered);
    if (json) {
      io.out << dump_payload({{"kb", kb->id}, {"context", parsed.context.values}, {"conflict", conflict_json(diag)}});
    } else {
      print_conflict(io.out, diag);
    }
    return kEmptyFeasibleSet;
  }
  Ranking ranking = rank(*kb, parsed.context);
  Explanation explanation = explain(*kb, parsed.context, ranking);
  if (json) {
    io.out << dump_payload(recommendations_payload(*kb, parsed.context, ranking, explanation));
  } else {
    print_table(io.out, *kb, ranking, explanation);
  }
  return kOk;
}

int cmd_evaluate(Streams io, const std::string& kb_file, const std::string& suite) {
  auto [catalog, kb] = load_kb(kb_file);
  auto report = evaluate_suite(*kb, suite);
  io.out << report.to_text();
  return report.all_passed() ? kOk : kFindings;
}

int cmd_lint(Streams io, const std::string& kb_file) {
  auto parsed = load_kb_file(kb_file);
  auto warnings = lint_kb(parsed.kb, &parsed.source);
  for (const auto& w : warnings) {
    if (w.span) io.out << to_string(*w.span) << ": ";
    io.out << "warning [" << to_string(w.kind) << "] " << w.element << ": " << w.message << '\n';
  }
  if (warnings.empty()) io.out << "no warnings\n";
  return warnings.empty() ? kOk : kFindings;
}

int cmd_wizard(Streams io, const std::string& kb_file, const std::string& save, const AssistantConfig& assistant_cfg) {
  auto [catalog, kb] = load_kb(kb_file);
  SessionEngine engine(catalog);
  Assistant assistant(assistant_cfg);
  Session s = run_wizard(engine, assistant, kb->id, io.in, io.out);
  if (!save.empty()) {
    std::ofstream f(save, std::ios::binary);
    f << serialize_snapshot(s);
    if (!f) throw Error(ErrorCode::Io, "cannot write '" + save + "'");
  }
  return kOk;
}

int cmd_calibrate(Streams io, const std::string& kb_file, const std::string& suite, const CalibrationOptions& opts,
                  const std::string& output) {
  auto parsed = load_kb_file(kb_file);
  auto contexts = load_suite_contexts(parsed.kb, suite);
  auto manifest = std::filesystem::path(suite) / kManifestFileName;
  auto expectations = parse_manifest(read_text_file(manifest), manifest.string());
  auto result = calibrate(parsed.kb, contexts, expectations, opts);
  io.out << "candidates evaluated: " << result.candidates << '\n';
  if (!result.found) {
    io.out << "no delta vector within distance " << opts.max_distance << " satisfies the expectations\n";
    return kFindings;
  }
  io.out << "L1 distance: " << result.distance << " steps, margin " << result.margin << '\n';
  for (const auto& c : result.changes) {
    io.out << "  " << c.rule << ' ' << c.criterion << ": " << c.from << " -> " << c.to << '\n';
  }
  if (!output.empty()) {
    std::ofstream f(output, std::ios::binary);
    f << serialize_kb(result.kb);
    if (!f) throw Error(ErrorCode::Io, "cannot write '" + output + "'");
  }
  return kOk;
}

int cmd_serve(Streams io, ServiceConfig config, const std::string& listen) {
  config.set_listen(listen);
  Service service(std::move(config));
  int port = service.bind();
  io.out << "listening on " << service.config().host << ':' << port << std::endl;
  service.listen_after_bind();
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Streams io{in, out, err};
  CLI::App app{"Security pattern recommender"};
  app.require_subcommand(1);

  std::string kb_file, ctx_file, suite, save, output, listen = "127.0.0.1:8080";
  bool json = false;
  CalibrationOptions cal;
  ServiceConfig service_cfg;
  AssistantConfig assistant_cfg = AssistantConfig::from_environment();
  std::string backend;

  auto* recommend = app.add_subcommand("recommend", "Rank the feasible patterns for a context file");
  recommend->add_option("kb", kb_file, "knowledge base (.kb)")->required();
  recommend->add_option("ctx", ctx_file, "context (.ctx)")->required();
  recommend->add_flag("--json", json, "emit the recommendation payload as JSON");

  auto* evaluate = app.add_subcommand("evaluate", "Check a suite of contexts against an expectations manifest");
  evaluate->add_option("kb", kb_file, "knowledge base (.kb)")->required();
  evaluate->add_option("suite", suite, "directory with .ctx files and expectations.manifest")->required();

  auto* lint = app.add_subcommand("lint", "Report dead patterns, vacuous filters and unused properties");
  lint->add_option("kb", kb_file, "knowledge base (.kb)")->required();

  auto* wizard = app.add_subcommand("wizard", "Interactive recommendation session");
  wizard->add_option("kb", kb_file, "knowledge base (.kb)")->required();
  wizard->add_option("--save", save, "write the final session snapshot to this file");

  auto* calib = app.add_subcommand("calibrate", "Grid-search weight-rule deltas against an expectations suite");
  calib->add_option("kb", kb_file, "knowledge base (.kb)")->required();
  calib->add_option("suite", suite, "suite directory")->required();
  calib->add_option("--step", cal.step, "grid step")->capture_default_str();
  calib->add_option("--lower", cal.lower, "smallest delta")->capture_default_str();
  calib->add_option("--upper", cal.upper, "largest delta")->capture_default_str();
  calib->add_option("--max-distance", cal.max_distance, "largest L1 change in steps")->capture_default_str();
  calib->add_flag("!--allow-sign-change", cal.preserve_signs, "let non-zero deltas change sign");
  calib->add_option("-o,--output", output, "write the calibrated KB here");

  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--kb-dir", service_cfg.kb_dir, "directory of .kb files")->required();
  serve->add_option("--store-dir", service_cfg.store_dir, "session snapshot directory")->required();
  serve->add_option("--listen", listen, "host:port")->capture_default_str();

  for (auto* sub : {wizard, serve}) {
    sub->add_option("--assistant-backend", backend, "stub or external")->check(CLI::IsMember({"stub", "external"}));
    sub->add_option("--assistant-endpoint", assistant_cfg.endpoint, "external assistant URL");
    sub->add_option("--assistant-timeout", assistant_cfg.timeout_seconds, "seconds");
  }

  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    for (auto* sub : app.get_subcommands()) err << sub->help();
    return kInputError;
  }
  if (!backend.empty()) {
    assistant_cfg.backend = backend == "external" ? AssistantBackend::External : AssistantBackend::Stub;
  }
  service_cfg.assistant = assistant_cfg;

  try {
    if (*recommend) return cmd_recommend(io, kb_file, ctx_file, json);
    if (*evaluate) return cmd_evaluate(io, kb_file, suite);
    if (*lint) return cmd_lint(io, kb_file);
    if (*wizard) return cmd_wizard(io, kb_file, save, assistant_cfg);
    if (*calib) return cmd_calibrate(io, kb_file, suite, cal, output);
    if (*serve) return cmd_serve(io, service_cfg, listen);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace secrec::cli
