// steroid: decompose symmetric tensors into sums of scaled unit rank-1 terms.
//
// Subcommands:
//   decompose  read a tensor file, run the decomposition, write the result
//   embed      rewrite a tensor at the next power-of-two order
//   verify     check a decomposition file against a tensor file
//   generate   write a random symmetric tensor
//
// Exit codes: 0 success, 1 verification failure, 2 parse or shape errors,
// 3 symmetry errors.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "steroid/steroid.hpp"

namespace {

std::string fmt(double v) { return steroid::detail::format_number(v); }

std::string fmt_time(double seconds) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", seconds);
  return buf;
}

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6e", v);
  return buf;
}

struct DecomposeArgs {
  std::string input;
  std::string out;
  double tau = 1e-10;
  int max_iters = 10;
  std::string head = "ls";
  std::string format = "text";
};

int run_decompose(const DecomposeArgs& args) {
  const steroid::SymTensor<double> t = steroid::read_tensor_file(args.input);
  steroid::DecomposeOptions<double> opts;
  opts.tau = args.tau;
  opts.max_tail_iters = args.max_iters;
  opts.head = args.head == "eigenproduct" ? steroid::HeadMode::eigenproduct
                                          : steroid::HeadMode::ls;
  const steroid::Decomposition<double> dec = steroid::decompose(t, opts);
  steroid::write_decomposition_file(args.out, dec);

  if (args.format == "rows") {
    for (const auto& it : dec.report.iterations)
      std::cout << "iter=" << it.iteration << " cols=" << it.columns
                << " rank=" << it.numerical_rank << " residual=" << fmt(it.residual)
                << " time_s=" << fmt_time(it.seconds) << "\n";
    std::cout << "terms=" << dec.terms.size() << " residual=" << fmt(dec.residual_norm)
              << " rank_bound=" << dec.report.rank_bound
              << " converged=" << (dec.converged ? 1 : 0) << "\n";
  } else {
    std::cout << "tensor: order " << t.order() << ", dimension " << t.dim()
              << ", |t|_F = " << fmt_short(steroid::frobenius_norm(t))
              << ", rank bound " << dec.report.rank_bound << "\n";
    for (const auto& it : dec.report.iterations)
      std::cout << "pass " << it.iteration << ": +" << it.new_pure_powers
                << " pure powers, " << it.columns << " columns, rank "
                << it.numerical_rank << ", residual " << fmt_short(it.residual)
                << " (" << fmt_time(it.seconds) << " s)\n";
    std::cout << (dec.converged ? "converged" : "unconverged") << " after "
              << dec.tail_iterations << " tail iteration(s), " << dec.terms.size()
              << " terms, residual " << fmt_short(dec.residual_norm) << "\n";
    std::cout << "wrote " << args.out << "\n";
  }
  if (!dec.converged) std::cout << "unconverged\n";
  return 0;
}

int run_embed(const std::string& input, const std::string& out) {
  const steroid::SymTensor<double> t = steroid::read_tensor_file(input);
  const steroid::SymTensor<double> b = steroid::embed(t);
  steroid::write_tensor_file(out, b);
  std::cout << "order " << t.order() << " -> " << b.order() << ", wrote " << out << "\n";
  return 0;
}

int run_verify(const std::string& tensor_path, const std::string& dec_path,
               double tau) {
  const steroid::SymTensor<double> t = steroid::read_tensor_file(tensor_path);
  const steroid::Decomposition<double> dec =
      steroid::read_decomposition_file(dec_path);
  if (dec.order != t.order() || dec.dim != t.dim())
    throw steroid::ShapeError("decomposition is order " + std::to_string(dec.order) +
                              " dim " + std::to_string(dec.dim) + ", tensor is order " +
                              std::to_string(t.order()) + " dim " +
                              std::to_string(t.dim()));
  const steroid::oracle::OracleReport report =
      steroid::oracle::verify_decomposition(t, dec);
  const double threshold =
      tau * std::max(1.0, static_cast<double>(steroid::frobenius_norm(t)));
  const bool ok = report.reconstruction_error <= threshold;
  std::cout << "terms=" << dec.terms.size()
            << " reconstruction_error=" << fmt(report.reconstruction_error)
            << " max_symmetry_violation=" << fmt(report.max_symmetry_violation)
            << " threshold=" << fmt(threshold) << "\n";
  std::cout << (ok ? "ok" : "FAIL") << "\n";
  return ok ? 0 : 1;
}

struct GenerateArgs {
  int order = 0;
  int dim = 0;
  std::uint64_t seed = 0;
  std::vector<long long> int_range;
  std::string out;
};

int run_generate(const GenerateArgs& args) {
  std::optional<std::pair<long long, long long>> range;
  if (!args.int_range.empty()) {
    if (args.int_range[0] > args.int_range[1])
      throw steroid::RangeError("--int-range lo must not exceed hi");
    range = std::make_pair(args.int_range[0], args.int_range[1]);
  }
  const steroid::SymTensor<double> t =
      steroid::random_symmetric<double>(args.order, args.dim, args.seed, range);
  steroid::write_tensor_file(args.out, t);
  std::cout << "wrote order " << args.order << " dimension " << args.dim
            << " tensor to " << args.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symmetric tensor decomposition into scaled unit rank-1 terms"};
  app.require_subcommand(1);

  DecomposeArgs dargs;
  CLI::App* dcmd = app.add_subcommand("decompose", "decompose a tensor file");
  dcmd->add_option("input", dargs.input, "tensor file")->required();
  dcmd->add_option("--out", dargs.out, "output decomposition file")->required();
  dcmd->add_option("--tau", dargs.tau,
                   "relative residual tolerance (default 1e-10)");
  dcmd->add_option("--max-iters", dargs.max_iters,
                   "maximum tail iterations (default 10)");
  dcmd->add_option("--head", dargs.head, "head mode: ls or eigenproduct")
      ->check(CLI::IsMember({"ls", "eigenproduct"}));
  dcmd->add_option("--format", dargs.format, "report format: text or rows")
      ->check(CLI::IsMember({"text", "rows"}));

  std::string embed_input, embed_out;
  CLI::App* ecmd = app.add_subcommand("embed", "embed at the next power-of-two order");
  ecmd->add_option("input", embed_input, "tensor file")->required();
  ecmd->add_option("--out", embed_out, "output tensor file")->required();

  std::string verify_tensor, verify_dec;
  double verify_tau = 1e-10;
  CLI::App* vcmd = app.add_subcommand("verify", "verify a decomposition file");
  vcmd->add_option("tensor", verify_tensor, "tensor file")->required();
  vcmd->add_option("decomposition", verify_dec, "decomposition file")->required();
  vcmd->add_option("--tau", verify_tau, "relative error tolerance (default 1e-10)");

  GenerateArgs gargs;
  CLI::App* gcmd = app.add_subcommand("generate", "write a random symmetric tensor");
  gcmd->add_option("--order", gargs.order, "tensor order")->required();
  gcmd->add_option("--dim", gargs.dim, "dimension")->required();
  gcmd->add_option("--seed", gargs.seed, "random seed (default 0)");
  gcmd->add_option("--int-range", gargs.int_range,
                   "draw uniform integers in [lo, hi] instead of normals")
      ->expected(2);
  gcmd->add_option("--out", gargs.out, "output tensor file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (dcmd->parsed()) return run_decompose(dargs);
    if (ecmd->parsed()) return run_embed(embed_input, embed_out);
    if (vcmd->parsed()) return run_verify(verify_tensor, verify_dec, verify_tau);
    if (gcmd->parsed()) return run_generate(gargs);
  } catch (const steroid::SymmetryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const steroid::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
