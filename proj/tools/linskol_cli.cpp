#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "linskol/frontend.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "linskol: skolemisation and focused proof search for first-order "
      "intuitionistic linear logic"};
  app.require_subcommand(1);

  linskol::RunFlags flags;
  std::string file;

  auto add_parse_flags = [&](CLI::App* c) {
    c->add_flag("--json", flags.json, "emit JSON instead of text");
    c->add_flag("--strict", flags.strict,
                "reject polarity mismatches instead of inserting shifts");
  };
  auto add_budget_flags = [&](CLI::App* c) {
    c->add_option("--copy-bound", flags.copy_bound,
                  "copies per closure per branch")
        ->capture_default_str();
    c->add_option("--depth", flags.depth, "maximum proof depth")
        ->capture_default_str();
  };

  CLI::App* sk = app.add_subcommand("skolemise", "skolemise a sequent file");
  sk->add_option("file", file, "input sequent (.lsk)")->required();
  add_parse_flags(sk);

  CLI::App* pr = app.add_subcommand("prove", "run one engine on a file");
  pr->add_option("file", file, "input sequent (.lsk)")->required();
  pr->add_option("--engine", flags.engine, "sljf | ljf")
      ->check(CLI::IsMember({"sljf", "ljf"}))
      ->capture_default_str();
  pr->add_flag("--reconstruct", flags.reconstruct,
               "rebuild and check the first-order proof (sljf only)");
  pr->add_option("--trace", flags.trace_path,
                 "write the search trace to this JSON file (sljf only)");
  add_budget_flags(pr);
  add_parse_flags(pr);

  CLI::App* cp = app.add_subcommand("compare", "run both engines on a file");
  cp->add_option("file", file, "input sequent (.lsk)")->required();
  add_budget_flags(cp);
  add_parse_flags(cp);

  CLI::App* ck = app.add_subcommand("check", "re-validate a proof document");
  ck->add_option("file", file, "proof JSON written by prove --json")
      ->required();
  ck->add_flag("--json", flags.json, "emit JSON instead of text");

  CLI::App* be = app.add_subcommand("bench", "run a corpus and emit CSV");
  be->add_option("--dir", flags.dir, "directory of .lsk files");
  be->add_option("--random", flags.random_count,
                 "generate this many random sequents instead");
  be->add_option("--seed", flags.seed, "seed for --random")
      ->capture_default_str();
  add_budget_flags(be);
  add_parse_flags(be);

  CLI11_PARSE(app, argc, argv);

  if (sk->parsed())
    return linskol::cmd_skolemise(file, flags, std::cout, std::cerr);
  if (pr->parsed())
    return linskol::cmd_prove(file, flags, std::cout, std::cerr);
  if (cp->parsed())
    return linskol::cmd_compare(file, flags, std::cout, std::cerr);
  if (ck->parsed()) return linskol::cmd_check(file, flags, std::cout, std::cerr);
  if (be->parsed()) return linskol::cmd_bench(flags, std::cout, std::cerr);
  return linskol::kExitInputError;
}
