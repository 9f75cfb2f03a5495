#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "acceptance.hpp"
#include "json.hpp"
#include "weillift/cmvalues.hpp"
#include "weillift/errors.hpp"
#include "weillift/invariant.hpp"
#include "weillift/lfunc.hpp"
#include "weillift/parallel.hpp"
#include "weillift/shintani.hpp"

using json = nlohmann::ordered_json;
using namespace weillift;

namespace {

std::string dec(const Real& x) { return x.str(); }

Complex parse_complex(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) return Complex(Real(s));
  return {Real(s.substr(0, comma)), Real(s.substr(comma + 1))};
}

qexp::Newform load_newform(const std::string& spec_, long nterms) {
  if (spec_ == "delta") return qexp::builtin_delta(nterms);
  if (spec_ == "eta6-3") return qexp::builtin_eta6_3(nterms);
  std::ifstream in(spec_);
  if (!in) throw validation_error("cannot open newform file " + spec_);
  json j = json::parse(in);
  qexp::Newform f;
  f.level = j.at("level").get<long>();
  f.weight = j.at("weight").get<long>();
  f.name = spec_;
  for (const auto& c : j.at("coeffs")) f.an.emplace_back(c.get<std::string>());
  if (j.contains("fricke") && !j["fricke"].is_null()) f.fricke = j["fricke"].get<int>();
  if (j.contains("eta_exponents") && !j["eta_exponents"].is_null()) {
    qexp::EtaQuotient q;
    for (auto& [k, v] : j["eta_exponents"].items())
      q.exponents[std::stol(k)] = v.get<int>();
    q.level_hint = f.level;
    f.eta = q;
  }
  f.check_eigenvalues(std::min<long>(200, static_cast<long>(f.an.size())));
  return f;
}

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << std::endl;
  } else {
    std::ofstream out(path);
    out << j.dump(2) << std::endl;
  }
}

int cmd_invariant_vector(long D1, long D2, long N, bool check, const std::string& out) {
  fqm::PhiN phi = fqm::build_phiN(D1, D2, N);
  json j;
  j["D1"] = D1;
  j["D2"] = D2;
  j["N"] = N;
  j["module_order"] = phi.module->size();
  j["module_order_expected"] = phi.module_order_expected;
  j["module_orders"] = phi.module->orders();
  j["H_order"] = phi.H.size();
  j["H_order_expected"] = phi.H_expected;
  j["perp_order"] = phi.perp_order;
  json support = json::array();
  for (const auto& [id, val] : phi.support) {
    json e;
    e["element"] = phi.module->coords(id);
    e["re"] = std::to_string(val);
    e["im"] = "0";
    support.push_back(e);
  }
  j["support"] = support;
  if (check) {
    json c;
    c["T_exact"] = phi.T_fixes_exactly;
    c["S_residual"] = fqm::sparse_S_residual(phi);
    c["signature"] = phi.module->signature_mod8();
    c["H_isotropic"] = true;  // enforced by the builder
    j["check"] = c;
  }
  emit(j, out);
  return 0;
}

int cmd_shintani(const std::string& nf, long twist, const std::string& mlist, double tol,
                 const std::string& out) {
  qexp::Newform f = load_newform(nf, 420);
  json arr = json::array();
  std::stringstream ss(mlist);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    long m = std::stol(tok);
    auto t = shintani::twisted_trace(f, twist, m, tol);
    json e;
    e["m"] = m;
    e["twist"] = twist;
    e["value_re"] = dec(t.value.re);
    e["value_im"] = dec(t.value.im);
    e["error"] = t.error;
    e["classes"] = t.nclasses;
    arr.push_back(e);
  }
  json j;
  j["newform"] = f.name;
  j["level"] = f.level;
  j["weight"] = f.weight;
  j["coefficients"] = arr;
  emit(j, out);
  return 0;
}

int cmd_lfunc(const std::string& nf, long D1, long D2, long N, long N3, const std::string& s,
              std::optional<int> fricke, const std::string& out) {
  qexp::Newform f = load_newform(nf, 420);
  Complex sv = parse_complex(s);
  auto r = lfunc::rankin_selberg_L(f, N3, N, D1, D2, sv, fricke);
  json j;
  j["newform"] = f.name;
  j["D1"] = D1;
  j["D2"] = D2;
  j["N"] = N;
  j["N3"] = N3;
  j["s_re"] = dec(sv.re);
  j["s_im"] = dec(sv.im);
  j["value_re"] = dec(r.value.re);
  j["value_im"] = dec(r.value.im);
  j["error"] = r.error;
  j["identically_zero"] = r.identically_zero;
  json factors;
  for (const auto& [k, v] : r.factors) {
    json e;
    e["re"] = dec(v.re);
    e["im"] = dec(v.im);
    factors[k] = e;
  }
  j["factors"] = factors;
  emit(j, out);
  return 0;
}

int cmd_cm_norm(long N, long D1, long D2, long prec, const std::string& out) {
  auto cert = cm::cm_norm(N, D1, D2, prec);
  json j;
  j["N"] = N;
  j["D1"] = D1;
  j["D2"] = D2;
  j["cycle_size"] = cert.cycle_size;
  j["precision_bits"] = cert.precision;
  j["product_log"] = cert.product_log10;
  j["nearest_integer"] = cert.nearest_integer.get_str();
  j["distance"] = cert.distance;
  json factors = json::object();
  for (const auto& [p, e] : cert.factors.factors) factors[p.get_str()] = e;
  j["factors"] = factors;
  j["is_unit"] = cert.is_unit;
  emit(j, out);
  return 0;
}

int cmd_green(const std::string& s, long N, const std::string& z1s, const std::string& z2s,
              double cutoff, const std::string& principal, const std::string& out) {
  Real sv(s);
  Complex z1 = parse_complex(z1s), z2 = parse_complex(z2s);
  json j;
  j["s"] = s;
  j["N"] = N;
  if (principal.empty()) {
    auto g = cm::green_GN(sv, N, z1, z2, cutoff);
    j["kind"] = "GN";
    j["value"] = dec(g.value);
    j["tail_bound"] = g.tail_bound;
    j["terms"] = g.terms;
  } else {
    std::vector<std::pair<long, double>> pp;
    std::stringstream ss(principal);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      auto colon = tok.find(':');
      pp.emplace_back(std::stol(tok.substr(0, colon)), std::stod(tok.substr(colon + 1)));
    }
    long k = sv.to_long();
    auto g = cm::green_Gkf(k, pp, N, z1, z2, cutoff);
    j["kind"] = "Gkf";
    j["value"] = dec(g.value);
    j["tail_bound"] = g.tail_bound;
    j["terms"] = g.terms;
  }
  emit(j, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weillift: invariant vectors, Shintani lifts, Rankin-Selberg "
               "L-functions and CM value certificates"};
  app.require_subcommand(1);

  long prec = 256;
  if (const char* env = std::getenv("WEILLIFT_PREC")) prec = std::atol(env);
  unsigned threads = 0;
  std::string output;
  app.add_option("--prec", prec, "working precision in bits (>= 64)");
  app.add_option("--threads", threads, "worker threads (0 = hardware)");
  app.add_option("--output", output, "write JSON to a file instead of stdout");

  auto* iv = app.add_subcommand("invariant-vector", "lattice invariant vector phi_N");
  long D1 = 0, D2 = 0, N = 1;
  bool check = false;
  iv->add_option("--D1", D1)->required();
  iv->add_option("--D2", D2)->required();
  iv->add_option("--N", N)->required();
  iv->add_flag("--check", check, "verify invariance residuals");

  auto* sh = app.add_subcommand("shintani-lift", "twisted traces / lift coefficients");
  std::string nf = "delta", mlist = "1";
  long twist = 1;
  double tol = 1e-12;
  sh->add_option("--newform", nf, "newform JSON file or builtin name (delta, eta6-3)");
  sh->add_option("--twist", twist)->required();
  sh->add_option("--m-list", mlist)->required();
  sh->add_option("--tol", tol);

  auto* lf = app.add_subcommand("lfunc-eval", "explicit Rankin-Selberg L-value");
  std::string sarg = "0";
  long N3 = 1;
  int fricke_in = 0;
  lf->add_option("--newform", nf);
  lf->add_option("--D1", D1)->required();
  lf->add_option("--D2", D2)->required();
  lf->add_option("--N", N)->required();
  lf->add_option("--N3", N3);
  lf->add_option("--s", sarg, "evaluation point RE or RE,IM")->required();
  lf->add_option("--fricke", fricke_in, "override the Fricke sign (+1 or -1)");

  auto* cn = app.add_subcommand("cm-norm", "CM value norm certificate");
  cn->add_option("--N", N)->required();
  cn->add_option("--D1", D1)->required();
  cn->add_option("--D2", D2)->required();

  auto* gr = app.add_subcommand("green", "hyperbolic Green function sums");
  std::string sgreen = "2", z1s = "0,1", z2s = "0.5,1.5", principal;
  double cutoff = 2000;
  gr->add_option("--s", sgreen)->required();
  gr->add_option("--N", N)->required();
  gr->add_option("--z1", z1s)->required();
  gr->add_option("--z2", z2s)->required();
  gr->add_option("--cutoff", cutoff);
  gr->add_option("--principal", principal, "principal part m:c,m:c for the higher Green function");

  auto* vf = app.add_subcommand("verify", "run the acceptance suite");
  bool quick = false;
  vf->add_flag("--quick", quick, "skip the heavy lattice case");

  CLI11_PARSE(app, argc, argv);

  try {
    if (prec < 64) throw validation_error("precision must be at least 64 bits");
    set_default_prec(prec);
    if (threads) set_worker_count(threads);
    if (*iv) return cmd_invariant_vector(D1, D2, N, check, output);
    if (*sh) return cmd_shintani(nf, twist, mlist, tol, output);
    if (*lf)
      return cmd_lfunc(nf, D1, D2, N, N3, sarg,
                       fricke_in ? std::optional<int>(fricke_in) : std::nullopt, output);
    if (*cn) return cmd_cm_norm(N, D1, D2, prec, output);
    if (*gr) return cmd_green(sgreen, N, z1s, z2s, cutoff, principal, output);
    if (*vf) return acceptance::run_all(std::cout, !quick) ? 0 : 1;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const precision_error& e) {
    std::cerr << "precision error: " << e.what() << std::endl;
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 1;
}
