#include "virblocks/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "virblocks/assoc.hpp"
#include "virblocks/qgroup.hpp"
#include "virblocks/series.hpp"
#include "virblocks/virasoro.hpp"

namespace vb {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json ratfunc_json(const RatFunc& r) { return {{"num", r.num().str()}, {"den", r.den().str()}}; }

json cplx_json(const Cplx& c) { return {{"re", c.real()}, {"im", c.imag()}}; }

std::string cplx_text(const Cplx& c) {
  std::ostringstream os;
  os << std::setprecision(17) << c.real() << (c.imag() < 0 ? " - " : " + ") << std::abs(c.imag()) << "i";
  return os.str();
}

std::string join(const std::vector<int>& v, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

double default_kappa() {
  const char* env = std::getenv("VIRBLOCKS_KAPPA");
  if (!env || !*env) return Tolerances::default_kappa;
  char* end = nullptr;
  double k = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(k > 0)) throw UsageError("VIRBLOCKS_KAPPA must be a positive number");
  return k;
}

json linear_map_json(const LinearMap& m) {
  json entries = json::array();
  for (const auto& [src, col] : m.columns)
    for (const auto& [dst, c] : col.entries) {
      std::vector<int> idx = src;
      idx.insert(idx.end(), dst.begin(), dst.end());
      json e = ratfunc_json(c);
      e["index"] = idx;
      entries.push_back(e);
    }
  return entries;
}

Insertion parse_insertion(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("--insert expects slot:partition, e.g. bra:2 or w1:1,1");
  std::string slot = s.substr(0, colon), parts = s.substr(colon + 1);
  Insertion ins;
  if (slot == "ket" || slot == "w0" || slot == "0")
    ins.slot = 0;
  else if (slot == "w1" || slot == "1")
    ins.slot = 1;
  else if (slot == "w2" || slot == "2")
    ins.slot = 2;
  else if (slot == "bra" || slot == "3")
    ins.slot = 3;
  else
    throw UsageError("unknown insertion slot '" + slot + "' (use ket, w1, w2, bra)");
  std::stringstream ss(parts);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      int n = std::stoi(item, &used);
      if (used != item.size() || n < 1) throw std::invalid_argument(item);
      ins.word.push_back(n);
    } catch (const std::exception&) {
      throw UsageError("bad partition part '" + item + "'");
    }
  }
  if (ins.word.empty()) throw UsageError("empty insertion partition");
  return ins;
}

json report_json(const AssocReport& r) {
  json j;
  j["labels"] = r.labels;
  j["sigma"] = r.sigma;
  json ins = json::array();
  for (const auto& i : r.insertions) ins.push_back({{"slot", i.slot}, {"partition", i.word}});
  j["insertions"] = ins;
  j["point"] = {r.x1, r.x2};
  j["kappa"] = r.kappa0;
  j["trunc_requested"] = r.K_requested;
  j["trunc_A"] = r.K_A;
  j["trunc_B"] = r.K_B;
  j["value_A"] = cplx_json(r.value_A);
  j["value_B"] = cplx_json(r.value_B);
  j["tail_heuristic_A"] = r.tail_A;
  j["tail_heuristic_B"] = r.tail_B;
  j["abs_diff"] = r.abs_diff;
  j["rel_diff"] = r.rel_diff;
  json six = json::array();
  for (const auto& [mu, v] : r.sixj_values)
    six.push_back({{"mu", mu}, {"sixj", cplx_json(v)}, {"branch_value", cplx_json(r.branch_values.at(mu))}});
  j["sixj"] = six;
  j["tol"] = r.tol;
  j["verdict"] = r.verdict;
  return j;
}

std::string report_text(const AssocReport& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "labels " << join(r.labels) << " sigma " << r.sigma << " point (" << r.x1 << ", " << r.x2 << ") kappa "
     << r.kappa0 << "\n";
  os << "truncation requested " << r.K_requested << ", used A " << r.K_A << " B " << r.K_B << "\n";
  os << "A = " << cplx_text(r.value_A) << "\nB = " << cplx_text(r.value_B) << "\n";
  for (const auto& [mu, v] : r.sixj_values)
    os << "  mu " << mu << ": 6j " << cplx_text(v) << ", branch " << cplx_text(r.branch_values.at(mu)) << "\n";
  os << "rel_diff " << r.rel_diff << " tol " << r.tol << " verdict " << (r.verdict ? "true" : "false") << "\n";
  return os.str();
}

void emit(std::ostream& out, const std::string& format, const json& j, const std::string& text) {
  if (format == "json")
    out << j.dump() << "\n";
  else
    out << text;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"virblocks: quantum-group and Virasoro conformal-block computations"};
  app.require_subcommand(1);
  std::string format = "json";
  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
  };

  // fusion
  int f_l = 0, f_m = 0;
  auto* fusion = app.add_subcommand("fusion", "Allowed ν for first-row labels λ, μ");
  fusion->add_option("--l", f_l)->required()->check(CLI::NonNegativeNumber);
  fusion->add_option("--m", f_m)->required()->check(CLI::NonNegativeNumber);
  add_format(fusion);

  // cg
  int cg_sigma = 0, cg_lambda = 0, cg_mu = 0;
  std::string cg_kind = "embed";
  auto* cg = app.add_subcommand("cg", "Clebsch–Gordan embedding M_σ → M_λ⊗M_μ or projection back");
  cg->add_option("--sigma", cg_sigma)->required()->check(CLI::NonNegativeNumber);
  cg->add_option("--lambda", cg_lambda)->required()->check(CLI::NonNegativeNumber);
  cg->add_option("--mu", cg_mu)->required()->check(CLI::NonNegativeNumber);
  cg->add_option("--kind", cg_kind)->check(CLI::IsMember({"embed", "project"}));
  add_format(cg);

  // sixj
  int s_sigma = 0, s_l3 = 0, s_l2 = 0, s_l1 = 0;
  bool s_verify = false;
  auto* sixj_cmd = app.add_subcommand("sixj", "6j table for fixed (σ, λ3, λ2, λ1), indexed by (κ, ν)");
  sixj_cmd->add_option("--sigma", s_sigma)->required()->check(CLI::NonNegativeNumber);
  sixj_cmd->add_option("--l3", s_l3)->required()->check(CLI::NonNegativeNumber);
  sixj_cmd->add_option("--l2", s_l2)->required()->check(CLI::NonNegativeNumber);
  sixj_cmd->add_option("--l1", s_l1)->required()->check(CLI::NonNegativeNumber);
  sixj_cmd->add_flag("--verify", s_verify, "Also check the defining expansion exactly");
  add_format(sixj_cmd);

  // singular
  int sv_lambda = 0;
  auto* singular = app.add_subcommand("singular", "PBW expansion of the singular vector S_λ v");
  singular->add_option("--lambda", sv_lambda)->required()->check(CLI::Range(0, 12));
  add_format(singular);

  // block
  std::vector<int> b_lambdas, b_sigmas;
  int b_trunc = 8;
  std::vector<double> b_eval;
  double b_kappa = 0;
  auto* block = app.add_subcommand("block", "Frobenius series of a composed-intertwiner block");
  block->add_option("--lambdas", b_lambdas, "λ_0,…,λ_N,λ_∞")->required()->delimiter(',');
  block->add_option("--sigmas", b_sigmas, "ς_0,…,ς_N")->required()->delimiter(',');
  block->add_option("--trunc", b_trunc)->check(CLI::Range(0, 200));
  block->add_option("--eval", b_eval, "x_1,…,x_N")->delimiter(',');
  auto* b_kappa_opt = block->add_option("--kappa", b_kappa)->check(CLI::PositiveNumber);
  add_format(block);

  // assoc-check
  std::vector<int> a_labels;
  int a_sigma = 0, a_trunc = Tolerances::default_trunc;
  std::vector<double> a_point{0.8, 1.0};
  double a_kappa = 0, a_tol = Tolerances::assoc_tol;
  std::vector<std::string> a_insert;
  bool a_fixed = false;
  auto* assoc = app.add_subcommand("assoc-check", "Compare both expansions of the four-point block via 6j symbols");
  assoc->add_option("--labels", a_labels, "λ_0,λ_1,λ_2,λ_∞")->required()->delimiter(',');
  assoc->add_option("--sigma", a_sigma)->required()->check(CLI::NonNegativeNumber);
  assoc->add_option("--point", a_point, "x_1,x_2")->delimiter(',');
  auto* a_kappa_opt = assoc->add_option("--kappa", a_kappa)->check(CLI::PositiveNumber);
  assoc->add_option("--trunc", a_trunc, "Minimum truncation order")->check(CLI::Range(0, 400));
  assoc->add_option("--tol", a_tol)->check(CLI::PositiveNumber);
  assoc->add_option("--insert", a_insert, "slot:partition with slot in {ket,w1,w2,bra}");
  assoc->add_flag("--fixed-trunc", a_fixed, "Use the requested truncation exactly (no growth)");
  add_format(assoc);

  // hw-space
  std::vector<int> h_shape;
  int h_sigma = 0;
  bool h_basis = false;
  auto* hw = app.add_subcommand("hw-space", "Highest-weight vectors of weight σ in M_λ0⊗…⊗M_λN");
  hw->add_option("--shape", h_shape, "λ_0,…,λ_N")->required()->delimiter(',');
  hw->add_option("--sigma", h_sigma)->required()->check(CLI::NonNegativeNumber);
  hw->add_flag("--basis", h_basis, "Include the basis vectors");
  add_format(hw);

  std::vector<std::string> argv_store{"virblocks"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (fusion->parsed()) {
      auto allowed = fusion_channels(f_l, f_m);
      emit(out, format, json{{"allowed", allowed}}, "allowed: " + join(allowed, " ") + "\n");
    } else if (cg->parsed()) {
      if (!in_selection_set(cg_sigma, cg_lambda, cg_mu))
        throw Error(ErrorCode::SelectionRuleViolation, "σ is not in the selection set of (λ, μ)");
      const LinearMap& m =
          cg_kind == "embed" ? cg_embed(cg_sigma, cg_lambda, cg_mu) : cg_project(cg_lambda, cg_mu, cg_sigma);
      json j{{"labels", {cg_sigma, cg_lambda, cg_mu}}, {"kind", cg_kind}, {"entries", linear_map_json(m)}};
      std::ostringstream os;
      for (const auto& e : j["entries"])
        os << "[" << join(e["index"].get<std::vector<int>>()) << "] (" << e["num"].get<std::string>() << ")/("
           << e["den"].get<std::string>() << ")\n";
      emit(out, format, j, os.str());
    } else if (sixj_cmd->parsed()) {
      auto table = sixj_table(s_sigma, s_l3, s_l2, s_l1);
      if (table.empty()) throw Error(ErrorCode::SelectionRuleViolation, "no admissible (κ, ν) for these labels");
      json entries = json::array();
      std::ostringstream os;
      for (const auto& e : table) {
        json x = ratfunc_json(e.value);
        x["index"] = {e.kidx, e.nu};
        entries.push_back(x);
        os << "kappa " << e.kidx << " nu " << e.nu << ": " << e.value.str() << "\n";
      }
      json j{{"labels", {s_sigma, s_l3, s_l2, s_l1}}, {"entries", entries}};
      if (s_verify) {
        bool ok = verify_sixj_identity(s_sigma, s_l3, s_l2, s_l1);
        j["identity_verified"] = ok;
        os << "identity verified: " << (ok ? "true" : "false") << "\n";
      }
      emit(out, format, j, os.str());
    } else if (singular->parsed()) {
      VermaVector s = singular_vector(sv_lambda);
      json arr = json::array();
      std::ostringstream os;
      for (const auto& [p, c] : s.entries) {
        arr.push_back({{"partition", p}, {"coef_num", c.num().str()}, {"coef_den", c.den().str()}});
        os << "L[" << join(p) << "]: " << c.str() << "\n";
      }
      emit(out, format, arr, os.str());
    } else if (block->parsed()) {
      const double k0 = b_kappa_opt->count() ? b_kappa : default_kappa();
      FrobeniusSeries<RatFunc> s = compose_blocks<RatFunc>(b_lambdas, b_sigmas, b_trunc, k0);
      json j;
      j["delta"] = json::array();
      for (const auto& d : s.delta) j["delta"].push_back(d.str());
      j["trunc"] = s.trunc;
      json coeffs = json::array();
      // ordered by total order, then offsets
      std::vector<std::pair<std::vector<int>, const RatFunc*>> rows;
      for (const auto& [e, c] : s.coeffs) rows.push_back({offsets_of(e), &c});
      std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        int sa = 0, sb = 0;
        for (int v : a.first) sa += v;
        for (int v : b.first) sb += v;
        return sa != sb ? sa < sb : a.first < b.first;
      });
      std::ostringstream os;
      os << "delta:";
      for (const auto& d : s.delta) os << " [" << d.str() << "]";
      os << "\n";
      for (const auto& [off, c] : rows) {
        coeffs.push_back({{"offset", off}, {"num", c->num().str()}, {"den", c->den().str()}});
        os << "offset [" << join(off) << "]: " << c->str() << "\n";
      }
      j["coeffs"] = coeffs;
      json pre = json::array();
      for (const auto& b : s.prefactor) pre.push_back(b.factor_strings());
      j["prefactor_gammas"] = pre;
      if (!b_eval.empty()) {
        SeriesValue v = eval_series(s, k0, b_eval);
        j["kappa"] = k0;
        j["value"] = cplx_json(v.value);
        j["value"]["tail_heuristic"] = v.tail;
        os << "value at kappa " << std::setprecision(17) << k0 << ": " << cplx_text(v.value) << " (tail heuristic "
           << v.tail << ")\n";
      }
      emit(out, format, j, os.str());
    } else if (assoc->parsed()) {
      const double k0 = a_kappa_opt->count() ? a_kappa : default_kappa();
      if (a_point.size() != 2) throw UsageError("--point expects x1,x2");
      AssocOptions opt;
      opt.tol = a_tol;
      opt.adaptive = !a_fixed;
      std::vector<Insertion> ins;
      for (const auto& s : a_insert) ins.push_back(parse_insertion(s));
      AssocReport r = ins.empty() ? assoc_check(a_labels, a_sigma, a_point[0], a_point[1], k0, a_trunc, opt)
                                  : descendant_assoc_check(a_labels, a_sigma, ins, a_point[0], a_point[1], k0,
                                                           a_trunc, opt);
      emit(out, format, report_json(r), report_text(r));
    } else if (hw->parsed()) {
      auto basis = highest_weight_space(h_shape, h_sigma);
      std::vector<int> lambdas = h_shape;
      lambdas.push_back(h_sigma);
      const std::size_t paths = admissible_sequences(lambdas).size();
      json j{{"shape", h_shape}, {"sigma", h_sigma}, {"dim", basis.size()}, {"admissible_sequences", paths}};
      std::ostringstream os;
      os << "dim " << basis.size() << ", admissible sequences " << paths << "\n";
      if (h_basis) {
        json vs = json::array();
        for (const auto& v : basis) {
          json entries = json::array();
          for (const auto& [idx, c] : v.entries) {
            json e = ratfunc_json(c);
            e["index"] = idx;
            entries.push_back(e);
            os << "  [" << join(idx) << "] " << c.str() << "\n";
          }
          vs.push_back(entries);
          os << "\n";
        }
        j["basis"] = vs;
      }
      emit(out, format, j, os.str());
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace vb
