// Command-line front end: transport solving, interpolation, verification
// suites, the barycenter-twisting isometry, and report re-rendering.
//
// Exit codes: 0 success, 1 failed verification or uncomputable request,
// 2 malformed input.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "otlab/interpolate.hpp"
#include "otlab/json_io.hpp"
#include "otlab/report.hpp"

namespace {

using otlab::json;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw otlab::input_error("cannot write '" + path + "'");
  out << text;
}

otlab::AtomicMeasure load_measure(const std::string& path,
                                  const otlab::SpacePtr& fallback) {
  return otlab::measure_from_json(otlab::load_json_file(path), fallback);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for discrete optimal transport"};
  app.require_subcommand(1);

  // --- wp ------------------------------------------------------------------
  std::string wp_mu, wp_nu, wp_space, wp_plan_out;
  double wp_p = 2.0;
  CLI::App* wp = app.add_subcommand("wp", "optimal W_p between two measures");
  wp->add_option("--mu", wp_mu, "source measure JSON")->required();
  wp->add_option("--nu", wp_nu, "target measure JSON")->required();
  wp->add_option("--p", wp_p, "exponent p >= 1");
  wp->add_option("--space", wp_space,
                 "space JSON used when a measure omits its space");
  wp->add_option("--plan", wp_plan_out, "write the optimal plan JSON here");

  // --- interpolate -----------------------------------------------------------
  std::string ip_plan, ip_mu, ip_nu, ip_out;
  double ip_t = 0.5, ip_p = 2.0;
  CLI::App* ip = app.add_subcommand(
      "interpolate", "displacement interpolation along an optimal plan");
  ip->add_option("--plan", ip_plan, "transport plan JSON");
  ip->add_option("--mu", ip_mu, "source measure JSON (solved when no plan)");
  ip->add_option("--nu", ip_nu, "target measure JSON (solved when no plan)");
  ip->add_option("--p", ip_p, "exponent for the solve");
  ip->add_option("--t", ip_t, "path parameter in [0, 1]")->required();
  ip->add_option("--out", ip_out, "output file (stdout when omitted)");

  // --- verify ----------------------------------------------------------------
  std::string vf_suite, vf_format = "json", vf_out;
  std::uint64_t vf_seed = 42;
  CLI::App* vf = app.add_subcommand("verify", "run a verification suite");
  vf->add_option("suite", vf_suite, "suite name or 'all'")->required();
  vf->add_option("--seed", vf_seed, "deterministic sampling seed");
  vf->add_option("--format", vf_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  vf->add_option("--out", vf_out, "output file (stdout when omitted)");

  // --- exotic ----------------------------------------------------------------
  std::string ex_psi, ex_mu, ex_out;
  CLI::App* ex = app.add_subcommand(
      "exotic", "apply the barycenter-twisting isometry to a measure");
  ex->add_option("--psi", ex_psi, "orthogonal matrix JSON (2D array)")
      ->required();
  ex->add_option("--mu", ex_mu, "measure JSON on a 2-product")->required();
  ex->add_option("--out", ex_out, "output file (stdout when omitted)");

  // --- report ----------------------------------------------------------------
  std::string rp_in, rp_format = "json", rp_out;
  CLI::App* rp = app.add_subcommand("report", "re-render a stored report");
  rp->add_option("--in", rp_in, "report JSON")->required();
  rp->add_option("--format", rp_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  rp->add_option("--out", rp_out, "output file (stdout when omitted)");

  try {
    app.parse(argc, argv);

    if (wp->parsed()) {
      otlab::SpacePtr fallback;
      if (!wp_space.empty())
        fallback = otlab::space_from_json(otlab::load_json_file(wp_space));
      otlab::AtomicMeasure mu = load_measure(wp_mu, fallback);
      otlab::AtomicMeasure nu = load_measure(wp_nu, fallback);
      otlab::TransportPlan plan = otlab::solve_wp(mu, nu, wp_p);
      json out;
      out["p"] = plan.p();
      out["wp"] = plan.wp();
      out["cost"] = plan.cost();
      out["entries"] = plan.entries().size();
      if (mu.space()->is_one_dimensional())
        out["wp_quantile"] = otlab::wp_1d(mu, nu, wp_p);
      if (!wp_plan_out.empty())
        write_text(wp_plan_out, otlab::plan_to_json(plan).dump(2) + "\n");
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (ip->parsed()) {
      otlab::AtomicMeasure result = [&]() {
        if (!ip_plan.empty())
          return otlab::displacement_interpolate(
              otlab::plan_from_json(otlab::load_json_file(ip_plan)), ip_t);
        if (ip_mu.empty() || ip_nu.empty())
          throw otlab::input_error(
              "interpolate needs either --plan or both --mu and --nu");
        otlab::AtomicMeasure mu = load_measure(ip_mu, nullptr);
        otlab::AtomicMeasure nu = load_measure(ip_nu, nullptr);
        return otlab::displacement_interpolate(otlab::solve_wp(mu, nu, ip_p),
                                               ip_t);
      }();
      write_text(ip_out, otlab::measure_to_json(result).dump(2) + "\n");
      return 0;
    }

    if (vf->parsed()) {
      std::vector<std::string> names;
      if (vf_suite == "all")
        names = otlab::suite_names();
      else
        names.push_back(vf_suite);
      bool all_pass = true;
      std::string text;
      json array = json::array();
      for (const auto& name : names) {
        otlab::RunReport report = otlab::run_suite(name, vf_seed);
        all_pass = all_pass && report.all_pass();
        if (vf_format == "csv") {
          std::string csv = otlab::report_to_csv(report);
          if (!text.empty()) csv.erase(0, csv.find('\n') + 1);
          text += csv;
        } else {
          array.push_back(otlab::report_to_json_value(report));
        }
      }
      if (vf_format == "json")
        text = (names.size() == 1 ? array[0] : array).dump(2) + "\n";
      write_text(vf_out, text);
      return all_pass ? 0 : 1;
    }

    if (ex->parsed()) {
      json psi_doc = otlab::load_json_file(ex_psi);
      std::vector<std::vector<double>> psi;
      try {
        psi = psi_doc.get<std::vector<std::vector<double>>>();
      } catch (const nlohmann::json::exception&) {
        throw otlab::input_error("--psi must hold a square 2D array");
      }
      otlab::AtomicMeasure mu = load_measure(ex_mu, nullptr);
      otlab::IsometryCandidate phi = otlab::exotic_isometry(mu.space(), psi);
      write_text(ex_out,
                 otlab::measure_to_json(phi.apply(mu)).dump(2) + "\n");
      return 0;
    }

    if (rp->parsed()) {
      otlab::RunReport report = otlab::report_from_json_value(
          otlab::load_json_file(rp_in));
      std::string text = (rp_format == "csv")
                             ? otlab::report_to_csv(report)
                             : otlab::report_to_json(report);
      write_text(rp_out, text);
      return report.all_pass() ? 0 : 1;
    }
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const otlab::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const otlab::not_computable& e) {
    std::cerr << "not computable: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
