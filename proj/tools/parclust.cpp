// Copyright 2026 The parclust Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// parclust: EMST, HDBSCAN* and single-linkage hierarchies from the shell.
//
//   parclust emst --gen uniform:1000:2:seed=1 --output run
//   parclust hdbscan --input points.csv --minpts 10 --epsilon 0.5
//   parclust bench --gen varden:100000:3 --threads 1,8

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "parclust/app.hpp"

int main(int argc, char** argv) {
  parclust::RunConfig cfg;
  CLI::App app{"Parallel EMST and HDBSCAN* hierarchies", "parclust"};
  app.add_option("command", cfg.command,
                 "emst | hdbscan | single-linkage | bench")
      ->required()
      ->check(CLI::IsMember({"emst", "hdbscan", "single-linkage", "bench"}));
  app.add_option("--input", cfg.input, "Point file (CSV or whitespace)");
  app.add_option("--gen", cfg.gen,
                 "uniform:N:D[:seed=S] or varden:N:D[:seed=S][:clusters=C]");
  app.add_option("--minpts", cfg.min_pts, "Density parameter")
      ->capture_default_str();
  double eps = 0.0;
  auto* eps_opt = app.add_option("--epsilon", eps, "Cut radius for clusters");
  app.add_option("--algo", cfg.algo, "naive | gfk | memogfk | gantao")
      ->capture_default_str()
      ->check(CLI::IsMember({"naive", "gfk", "memogfk", "gantao"}));
  app.add_option("--start", cfg.start, "Start point of the reachability plot")
      ->capture_default_str();
  app.add_option("--threads", cfg.threads,
                 "Worker threads; a comma list for bench")
      ->delimiter(',');
  app.add_option("--seed", cfg.seed, "Generator seed when --gen has none")
      ->capture_default_str();
  app.add_option("--output", cfg.output, "Output file prefix")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (*eps_opt) cfg.epsilon = eps;

  try {
    if (cfg.command == "bench") {
      parclust::bench(cfg, std::cout);
    } else {
      for (const std::string& path : parclust::run(cfg))
        std::cerr << "wrote " << path << '\n';
    }
  } catch (const parclust::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
