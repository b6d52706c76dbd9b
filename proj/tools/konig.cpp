// Command line front end: file-based category/diagram/functor/structure
// inputs, JSON verdict reports on stdout, deterministic exit codes
// (0 property holds / solution found, 1 property fails / no solution,
// 2 invalid input).

#include <CLI11.hpp>

#include <konig/harness.hpp>
#include <konig/json_io.hpp>
#include <konig/konig.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using konig::json;

namespace {

struct Cli {
  bool pretty = false;
  int threads = 1;
  std::string hash_parts; // concatenated per-file hashes, in load order
};

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) konig::fail(konig::Errc::BadInput, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

konig::WorkspaceFile load_input(Cli& cli, const std::string& path_str) {
  fs::path path(path_str);
  std::string bytes = read_bytes(path);
  cli.hash_parts += konig::fnv1a_hex(bytes);
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& err) {
    konig::fail(konig::Errc::BadInput, "parse error in '" + path_str + "': " + err.what());
  }
  const auto& version = doc.contains("format_version") ? doc.at("format_version") : json();
  if (!version.is_number_integer() || version.get<int>() != konig::kFormatVersion)
    konig::fail(konig::Errc::BadInput, "unsupported or missing format_version in '" + path_str + "'");
  if (!doc.contains("kind") || !doc.at("kind").is_string())
    konig::fail(konig::Errc::BadInput, "missing kind in '" + path_str + "'");
  if (!doc.contains("payload")) konig::fail(konig::Errc::BadInput, "missing payload in '" + path_str + "'");
  konig::WorkspaceFile file;
  file.kind = doc.at("kind").get<std::string>();
  file.payload = doc.at("payload");
  file.origin = path.has_parent_path() ? path.parent_path() : fs::path(".");
  return file;
}

konig::WorkspaceFile load_kind(Cli& cli, const std::string& path, const std::string& kind) {
  konig::WorkspaceFile file = load_input(cli, path);
  if (file.kind != kind)
    konig::fail(konig::Errc::BadInput, "'" + path + "' has kind '" + file.kind + "', expected '" + kind + "'");
  return file;
}

konig::FinCategory load_category(Cli& cli, const std::string& path) {
  auto file = load_kind(cli, path, "category");
  return konig::validate_category(konig::category_from_json(file.payload));
}

struct LoadedDiagram {
  konig::FinCategory cat;
  konig::SetDiagram diag;
};

LoadedDiagram load_diagram(Cli& cli, const std::string& path) {
  auto file = load_kind(cli, path, "diagram");
  LoadedDiagram out{
      konig::resolve_category(konig::detail::need(file.payload, "category", "diagram payload"), file.origin),
      {}};
  out.diag = konig::validate_diagram(out.cat, konig::diagram_raw_from_json(file.payload));
  return out;
}

struct LoadedFunctor {
  konig::FinCategory source;
  konig::FinCategory target;
  konig::FunctorData functor;
};

LoadedFunctor load_functor(Cli& cli, const std::string& path) {
  auto file = load_kind(cli, path, "functor");
  LoadedFunctor out{
      konig::resolve_category(konig::detail::need(file.payload, "source", "functor payload"), file.origin),
      konig::resolve_category(konig::detail::need(file.payload, "target", "functor payload"), file.origin),
      {}};
  out.functor = konig::validate_functor(out.source, out.target, konig::functor_raw_from_json(file.payload));
  return out;
}

konig::TruncatedClass load_structclass(Cli& cli, const std::string& path) {
  auto file = load_kind(cli, path, "structclass");
  return konig::structclass_from_json(file.payload);
}

void write_output_file(const std::string& path, const std::string& kind, json payload) {
  std::ofstream out(path);
  if (!out) konig::fail(konig::Errc::BadInput, "cannot write '" + path + "'");
  out << konig::wrap_payload(kind, std::move(payload)).dump(2) << "\n";
}

int emit(const Cli& cli, const std::string& command, json report, int exit_code) {
  report["tool_version"] = konig::kToolVersion;
  report["input_hash"] = konig::fnv1a_hex(cli.hash_parts);
  report["command"] = command;
  std::cout << report.dump(cli.pretty ? 2 : -1) << "\n";
  return exit_code;
}

json coloring_to_json(const konig::FinCategory& cat, const konig::Coloring& chi) {
  json out;
  out["colors"] = chi.colors;
  json domain = json::array();
  for (konig::ArrId a : cat.hom(chi.dom_src, chi.dom_tgt)) domain.push_back(cat.arrow_name(a));
  out["domain"] = domain;
  out["assign"] = chi.assign;
  return out;
}

json solution_to_json(const konig::FinCategory& cat, const konig::SetDiagram& diag, const konig::Solution& sol) {
  json out = json::object();
  for (konig::ObjId o = 0; o < static_cast<konig::ObjId>(cat.object_count()); ++o)
    out[cat.object_name(o)] = diag.carrier[o][sol.choice[o]];
  return out;
}

json functor_report(const konig::FinCategory& src, const konig::FinCategory& tgt, const konig::FunctorData& f) {
  json out;
  out["objects"] = json::object();
  for (konig::ObjId o = 0; o < static_cast<konig::ObjId>(src.object_count()); ++o)
    out["objects"][src.object_name(o)] = tgt.object_name(f.obj_map[o]);
  out["arrows"] = json::object();
  for (konig::ArrId a = 0; a < static_cast<konig::ArrId>(src.arrow_count()); ++a)
    out["arrows"][src.arrow_name(a)] = tgt.arrow_name(f.arr_map[a]);
  return out;
}

std::vector<konig::ArrId> parse_arrow_list(const konig::FinCategory& cat, const std::string& csv) {
  std::vector<konig::ArrId> arrows;
  std::string token;
  std::istringstream in(csv);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    arrows.push_back(konig::require_arrow(cat, token));
  }
  return arrows;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-category solvability and Ramsey toolkit"};
  app.require_subcommand(1);
  Cli cli;
  bool json_flag = false;
  app.add_flag("--json", json_flag, "compact JSON reports (default)");
  app.add_flag("--pretty", cli.pretty, "pretty-print reports");
  app.add_option("--threads", cli.threads, "worker threads for coloring search")->default_val(1);

  std::string file_a, file_b, obj_a, obj_b, out_path, proj_path, arrows_csv;
  int colors = 2;
  int bound = -1;
  int max_base = -1;
  bool all_solutions = false;
  std::optional<std::size_t> cap;
  std::size_t cap_value = 0;
  int samples = 200;
  std::uint64_t seed = 0xC0FFEE;

  auto* c_validate = app.add_subcommand("validate", "validate any workspace file");
  c_validate->add_option("file", file_a)->required();

  auto* c_components = app.add_subcommand("components", "connected components of a category");
  c_components->add_option("file", file_a)->required();

  auto* c_confluent = app.add_subcommand("confluent", "confluence verdict with cocones");
  c_confluent->add_option("file", file_a)->required();

  auto* c_ramsey = app.add_subcommand("ramsey", "whole-category Ramsey verdict");
  c_ramsey->add_option("file", file_a)->required();
  c_ramsey->add_option("--colors", colors)->default_val(2);

  auto* c_witness = app.add_subcommand("witness", "find a Ramsey witness for a pair");
  c_witness->add_option("file", file_a)->required();
  c_witness->add_option("-A", obj_a)->required();
  c_witness->add_option("-B", obj_b)->required();
  c_witness->add_option("--colors", colors)->default_val(2);

  auto* c_solve = app.add_subcommand("solve", "solve a diagram (limit element)");
  c_solve->add_option("file", file_a)->required();
  c_solve->add_option("--arrows", arrows_csv, "restrict to the arrow set M (comma separated)");
  c_solve->add_flag("--all", all_solutions, "enumerate all solutions");
  c_solve->add_option("--cap", cap_value, "cap for --all");

  auto* c_bad = app.add_subcommand("bad-diagram", "coloring diagram defeating Ramsey witnesses");
  c_bad->add_option("file", file_a)->required();
  c_bad->add_option("-A", obj_a)->required();
  c_bad->add_option("-B", obj_b)->required();
  c_bad->add_option("--colors", colors)->default_val(2);
  c_bad->add_option("-o", out_path, "write the diagram file here");

  auto* c_confl = app.add_subcommand("confl-diagram", "counterexample diagram for a cocone-free pair");
  c_confl->add_option("file", file_a)->required();
  c_confl->add_option("-A", obj_a)->required();
  c_confl->add_option("-B", obj_b)->required();
  c_confl->add_option("-o", out_path, "write the diagram file here");

  auto* c_fibration = app.add_subcommand("fibration", "discrete fibration check for a functor");
  c_fibration->add_option("file", file_a)->required();

  auto* c_section = app.add_subcommand("section", "section of an expansion");
  c_section->add_option("file", file_a)->required();
  c_section->add_option("-o", out_path, "write the section functor here");

  auto* c_core = app.add_subcommand("core", "minimal endomorphism image of an expansion");
  c_core->add_option("file", file_a)->required();
  c_core->add_option("-o", out_path, "write the cored expansion functor here");

  auto* c_ep = app.add_subcommand("ep", "expansion property check");
  c_ep->add_option("file", file_a)->required();

  auto* c_hom = app.add_subcommand("hom-expansion", "homomorphism between two expansions of one base");
  c_hom->add_option("from", file_a)->required();
  c_hom->add_option("to", file_b)->required();
  c_hom->add_option("-o", out_path, "write the homomorphism functor here");

  auto* c_product = app.add_subcommand("product", "product of two categories");
  c_product->add_option("left", file_a)->required();
  c_product->add_option("right", file_b)->required();
  c_product->add_option("-o", out_path, "write the product category here");

  auto* c_slice = app.add_subcommand("slice", "slice category under an object");
  c_slice->add_option("file", file_a)->required();
  c_slice->add_option("-A", obj_a)->required();
  c_slice->add_option("-o", out_path, "write the slice category here");
  c_slice->add_option("--proj-out", proj_path, "write the projection functor here");

  auto* c_elts = app.add_subcommand("elts", "category of elements of a Cat-valued functor");
  c_elts->add_option("file", file_a)->required();
  c_elts->add_option("-o", out_path, "write the total category here");
  c_elts->add_option("--proj-out", proj_path, "write the projection functor here");

  auto* c_blowup = app.add_subcommand("blowup", "blowup of a structure class by another");
  c_blowup->add_option("base", file_a)->required();
  c_blowup->add_option("fiber", file_b)->required();
  c_blowup->add_option("--max-base", max_base, "largest base structure used");
  c_blowup->add_option("-o", out_path, "write the blowup category here");

  auto* c_superpose = app.add_subcommand("superpose", "free superposition of two structure classes");
  c_superpose->add_option("left", file_a)->required();
  c_superpose->add_option("right", file_b)->required();
  c_superpose->add_option("--bound", bound, "domain size bound")->required();
  c_superpose->add_option("-o", out_path, "write the superposition class here");

  auto* c_amalg = app.add_subcommand("amalgamation", "strong amalgamation check");
  c_amalg->add_option("file", file_a)->required();
  c_amalg->add_option("--bound", bound, "configuration size bound");

  auto* c_formulas = app.add_subcommand("formulas", "quantifier-free reduct formulas");
  c_formulas->add_option("upper", file_a)->required();
  c_formulas->add_option("lower", file_b)->required();

  auto* c_report = app.add_subcommand("report", "solvability ⟷ confluent+Ramsey harness on one category");
  c_report->add_option("file", file_a)->required();
  c_report->add_option("--colors", colors)->default_val(2);
  c_report->add_option("--samples", samples)->default_val(200);
  c_report->add_option("--seed", seed)->default_val(0xC0FFEE);

  CLI11_PARSE(app, argc, argv);
  if (c_solve->count("--cap")) cap = cap_value;

  try {
    if (*c_validate) {
      auto file = load_input(cli, file_a);
      if (file.kind == "category") {
        konig::validate_category(konig::category_from_json(file.payload));
      } else if (file.kind == "diagram") {
        auto cat = konig::resolve_category(konig::detail::need(file.payload, "category", "diagram payload"),
                                           file.origin);
        konig::validate_diagram(cat, konig::diagram_raw_from_json(file.payload));
      } else if (file.kind == "functor") {
        auto src = konig::resolve_category(konig::detail::need(file.payload, "source", "functor payload"),
                                           file.origin);
        auto tgt = konig::resolve_category(konig::detail::need(file.payload, "target", "functor payload"),
                                           file.origin);
        konig::validate_functor(src, tgt, konig::functor_raw_from_json(file.payload));
      } else if (file.kind == "catvalued") {
        konig::catvalued_from_json(file.payload, file.origin);
      } else if (file.kind == "structclass") {
        konig::structclass_from_json(file.payload);
      } else {
        konig::fail(konig::Errc::BadInput, "unknown kind '" + file.kind + "'");
      }
      return emit(cli, "validate", json{{"valid", true}, {"kind", file.kind}}, 0);
    }

    if (*c_components) {
      auto cat = load_category(cli, file_a);
      json blocks = json::array();
      for (const auto& block : konig::connected_components(cat)) {
        json names = json::array();
        for (konig::ObjId o : block) names.push_back(cat.object_name(o));
        blocks.push_back(names);
      }
      return emit(cli, "components", json{{"components", blocks}}, 0);
    }

    if (*c_confluent) {
      auto cat = load_category(cli, file_a);
      auto report = konig::is_confluent(cat);
      json out{{"confluent", report.confluent}};
      if (report.confluent) {
        json cocones = json::array();
        for (const auto& [pair, cocone] : report.cocones)
          cocones.push_back(json{{"a", cat.object_name(pair.first)},
                                 {"b", cat.object_name(pair.second)},
                                 {"apex", cat.object_name(cocone.apex)},
                                 {"from_a", cat.arrow_name(cocone.from_a)},
                                 {"from_b", cat.arrow_name(cocone.from_b)}});
        out["cocones"] = cocones;
      } else {
        out["counterexample"] = json::array(
            {cat.object_name(report.counterexample->first), cat.object_name(report.counterexample->second)});
      }
      return emit(cli, "confluent", out, report.confluent ? 0 : 1);
    }

    if (*c_ramsey) {
      auto cat = load_category(cli, file_a);
      auto report = konig::is_ramsey(cat, colors, cli.threads);
      json pairs = json::array();
      for (const auto& pair : report.pairs) {
        json entry{{"a", cat.object_name(pair.a)}, {"b", cat.object_name(pair.b)}};
        if (pair.witness) {
          entry["witness"] = cat.object_name(*pair.witness);
        } else {
          entry["witness"] = nullptr;
          json failures = json::array();
          for (const auto& [candidate, chi] : pair.failures)
            failures.push_back(json{{"candidate", cat.object_name(candidate)},
                                    {"coloring", coloring_to_json(cat, chi)}});
          entry["failures"] = failures;
        }
        pairs.push_back(entry);
      }
      return emit(cli, "ramsey", json{{"ramsey", report.ramsey}, {"colors", colors}, {"pairs", pairs}},
                  report.ramsey ? 0 : 1);
    }

    if (*c_witness) {
      auto cat = load_category(cli, file_a);
      auto witness = konig::find_witness(cat, konig::require_object(cat, obj_a),
                                         konig::require_object(cat, obj_b), colors, cli.threads);
      json out;
      out["witness"] = witness ? json(cat.object_name(*witness)) : json(nullptr);
      return emit(cli, "witness", out, witness ? 0 : 1);
    }

    if (*c_solve) {
      auto loaded = load_diagram(cli, file_a);
      if (!arrows_csv.empty()) {
        auto m = parse_arrow_list(loaded.cat, arrows_csv);
        auto sol = konig::solve_restricted(loaded.cat, loaded.diag, m);
        json out{{"solvable", sol.has_value()}};
        if (sol) out["solution"] = solution_to_json(loaded.cat, loaded.diag, *sol);
        return emit(cli, "solve", out, sol ? 0 : 1);
      }
      if (all_solutions) {
        auto sols = konig::enumerate_solutions(loaded.cat, loaded.diag, cap);
        json list = json::array();
        for (const auto& s : sols) list.push_back(solution_to_json(loaded.cat, loaded.diag, s));
        return emit(cli, "solve", json{{"solvable", !sols.empty()}, {"count", sols.size()}, {"solutions", list}},
                    sols.empty() ? 1 : 0);
      }
      auto sol = konig::solve(loaded.cat, loaded.diag);
      json out{{"solvable", sol.has_value()}};
      if (sol) {
        out["solution"] = solution_to_json(loaded.cat, loaded.diag, *sol);
        return emit(cli, "solve", out, 0);
      }
      json core = json::array();
      for (konig::ArrId a : *konig::minimal_unsat_core(loaded.cat, loaded.diag))
        core.push_back(loaded.cat.arrow_name(a));
      out["unsat_core"] = core;
      return emit(cli, "solve", out, 1);
    }

    if (*c_bad || *c_confl) {
      auto cat = load_category(cli, file_a);
      konig::ObjId a = konig::require_object(cat, obj_a);
      konig::ObjId b = konig::require_object(cat, obj_b);
      konig::SetDiagram diag = *c_bad ? konig::bad_coloring_diagram(cat, a, b, colors)
                                      : konig::confluence_counterexample_diagram(cat, a, b);
      json sizes = json::object();
      json empties = json::array();
      for (konig::ObjId o = 0; o < static_cast<konig::ObjId>(cat.object_count()); ++o) {
        sizes[cat.object_name(o)] = diag.carrier[o].size();
        if (diag.carrier[o].empty()) empties.push_back(cat.object_name(o));
      }
      if (!out_path.empty()) write_output_file(out_path, "diagram", konig::diagram_to_json(cat, diag));
      json out{{"carrier_sizes", sizes}, {"empty_carriers", empties}};
      if (!out_path.empty()) out["output"] = out_path;
      return emit(cli, *c_bad ? "bad-diagram" : "confl-diagram", out, 0);
    }

    if (*c_fibration) {
      auto loaded = load_functor(cli, file_a);
      auto check = konig::is_discrete_fibration(loaded.source, loaded.target, loaded.functor);
      json out{{"discrete_fibration", check.ok}};
      if (!check.ok)
        out["certificate"] = json{{"object", loaded.source.object_name(check.object)},
                                  {"base_arrow", loaded.target.arrow_name(check.base_arrow)},
                                  {"lifts", check.lifts}};
      return emit(cli, "fibration", out, check.ok ? 0 : 1);
    }

    if (*c_section) {
      auto loaded = load_functor(cli, file_a);
      auto pi = konig::as_expansion(loaded.source, loaded.target, loaded.functor);
      auto alpha = konig::section(pi);
      json out{{"section", alpha ? functor_report(pi.base, pi.total, *alpha) : json(nullptr)}};
      if (alpha && !out_path.empty())
        write_output_file(out_path, "functor", konig::functor_to_json(pi.base, pi.total, *alpha));
      return emit(cli, "section", out, alpha ? 0 : 1);
    }

    if (*c_core) {
      auto loaded = load_functor(cli, file_a);
      auto pi = konig::as_expansion(loaded.source, loaded.target, loaded.functor);
      auto core = konig::compute_core(pi);
      json kept = json::array();
      for (konig::ObjId o : core.kept_objects) kept.push_back(pi.total.object_name(o));
      json fibers = json::object();
      for (konig::ObjId c = 0; c < static_cast<konig::ObjId>(core.core.base.object_count()); ++c)
        fibers[core.core.base.object_name(c)] = core.core.fibers[c].size();
      if (!out_path.empty())
        write_output_file(out_path, "functor",
                          konig::functor_to_json(core.core.total, core.core.base, core.core.proj));
      json out{{"kept_objects", kept}, {"fiber_sizes", fibers}, {"core_law_verified", core.core_law_verified}};
      if (!out_path.empty()) out["output"] = out_path;
      return emit(cli, "core", out, 0);
    }

    if (*c_ep) {
      auto loaded = load_functor(cli, file_a);
      auto pi = konig::as_expansion(loaded.source, loaded.target, loaded.functor);
      auto report = konig::has_expansion_property(pi);
      json witnesses = json::object();
      for (konig::ObjId c = 0; c < static_cast<konig::ObjId>(pi.base.object_count()); ++c)
        witnesses[pi.base.object_name(c)] =
            report.witness[c] ? json(pi.base.object_name(*report.witness[c])) : json(nullptr);
      return emit(cli, "ep", json{{"expansion_property", report.has_ep}, {"witnesses", witnesses}},
                  report.has_ep ? 0 : 1);
    }

    if (*c_hom) {
      auto from = load_functor(cli, file_a);
      auto to = load_functor(cli, file_b);
      if (konig::category_to_json(from.target) != konig::category_to_json(to.target))
        konig::fail(konig::Errc::BadInput, "the two expansions do not share a base category");
      auto pi = konig::as_expansion(from.source, from.target, from.functor);
      auto rho = konig::as_expansion(to.source, to.target, to.functor);
      auto alpha = konig::find_expansion_hom(pi, rho);
      json out{{"hom", alpha ? functor_report(pi.total, rho.total, *alpha) : json(nullptr)}};
      if (alpha && !out_path.empty())
        write_output_file(out_path, "functor", konig::functor_to_json(pi.total, rho.total, *alpha));
      return emit(cli, "hom-expansion", out, alpha ? 0 : 1);
    }

    if (*c_product) {
      auto left = load_category(cli, file_a);
      auto right = load_category(cli, file_b);
      auto prod = konig::product(left, right);
      if (!out_path.empty()) write_output_file(out_path, "category", konig::category_to_json(prod));
      json out{{"objects", prod.object_count()}, {"arrows", prod.arrow_count()}};
      if (!out_path.empty()) out["output"] = out_path;
      return emit(cli, "product", out, 0);
    }

    if (*c_slice) {
      auto cat = load_category(cli, file_a);
      auto result = konig::slice(cat, konig::require_object(cat, obj_a));
      if (!out_path.empty()) write_output_file(out_path, "category", konig::category_to_json(result.category));
      if (!proj_path.empty())
        write_output_file(proj_path, "functor",
                          konig::functor_to_json(result.category, cat, result.projection));
      json out{{"objects", result.category.object_count()}, {"arrows", result.category.arrow_count()}};
      return emit(cli, "slice", out, 0);
    }

    if (*c_elts) {
      auto file = load_kind(cli, file_a, "catvalued");
      auto s = konig::catvalued_from_json(file.payload, file.origin);
      auto elts = konig::grothendieck_elts(s);
      if (!out_path.empty()) write_output_file(out_path, "category", konig::category_to_json(elts.total));
      if (!proj_path.empty())
        write_output_file(proj_path, "functor", konig::functor_to_json(elts.total, s.base, elts.projection));
      json out{{"objects", elts.total.object_count()}, {"arrows", elts.total.arrow_count()}};
      return emit(cli, "elts", out, 0);
    }

    if (*c_blowup) {
      auto ks = load_structclass(cli, file_a);
      auto kt = load_structclass(cli, file_b);
      auto result = konig::blowup(ks, kt, max_base);
      if (!out_path.empty()) write_output_file(out_path, "category", konig::category_to_json(result.cat));
      json out{{"objects", result.cat.object_count()}, {"arrows", result.cat.arrow_count()}};
      return emit(cli, "blowup", out, 0);
    }

    if (*c_superpose) {
      auto ks = load_structclass(cli, file_a);
      auto kt = load_structclass(cli, file_b);
      auto joined = konig::free_superposition(ks, kt, bound);
      if (!out_path.empty()) write_output_file(out_path, "structclass", konig::structclass_to_json(joined));
      json out{{"members", joined.members.size()}};
      if (!out_path.empty()) out["output"] = out_path;
      return emit(cli, "superpose", out, 0);
    }

    if (*c_amalg) {
      auto k = load_structclass(cli, file_a);
      int effective = bound < 0 ? k.max_size : bound;
      auto report = konig::has_strong_amalgamation(k, effective);
      json out{{"strong_amalgamation", report.has_sap}, {"bound", effective}};
      if (!report.has_sap) {
        const auto& f = *report.failure;
        out["failure"] = json{{"a", k.names[f.a]}, {"b", k.names[f.b]}, {"c", k.names[f.c]},
                              {"f", f.f},          {"g", f.g}};
      }
      return emit(cli, "amalgamation", out, report.has_sap ? 0 : 1);
    }

    if (*c_formulas) {
      auto upper = load_structclass(cli, file_a);
      auto lower = load_structclass(cli, file_b);
      auto formulas = konig::define_reduct_formulas(upper, lower);
      bool verified = konig::verify_reduct_formulas(upper, lower, formulas);
      json out{{"verified", verified}};
      json rendered = json::object();
      for (std::size_t r = 0; r < formulas.sigma.symbols.size(); ++r)
        rendered[formulas.sigma.symbols[r]] = konig::formula_to_string(formulas.phi[r], upper.sig);
      out["formulas"] = rendered;
      return emit(cli, "formulas", out, verified ? 0 : 1);
    }

    if (*c_report) {
      auto cat = load_category(cli, file_a);
      konig::HarnessOptions opt;
      opt.colors = colors;
      opt.samples = samples;
      opt.seed = seed;
      opt.threads = cli.threads;
      auto harness = konig::run_theorem_harness(cat, opt);
      json out{{"confluent", harness.confluent},
               {"ramsey", harness.ramsey},
               {"expect_solvable", harness.expect_solvable},
               {"consistent", harness.consistent}};
      if (harness.expect_solvable) {
        out["exhaustive"] = json{{"count", harness.exhaustive_checked},
                                 {"all_solvable", harness.exhaustive_all_solvable}};
        out["sampled"] =
            json{{"count", harness.sampled_checked}, {"all_solvable", harness.sampled_all_solvable}};
      } else {
        out["counterexample"] = json{{"kind", harness.counterexample_kind},
                                     {"nonempty_carriers", harness.counterexample_nonempty_carriers},
                                     {"unsolvable", harness.counterexample_unsolvable}};
      }
      return emit(cli, "report", out, harness.consistent ? 0 : 1);
    }
  } catch (const konig::Error& err) {
    json out{{"error", json{{"code", konig::errc_name(err.code())}, {"message", err.what()}}}};
    return emit(cli, app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name(), out, 2);
  } catch (const std::exception& err) {
    json out{{"error", json{{"code", "Internal"}, {"message", err.what()}}}};
    return emit(cli, "", out, 2);
  }
  return 2;
}
