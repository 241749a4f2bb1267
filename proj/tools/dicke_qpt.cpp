// dicke_qpt: sweeps, phase diagrams and single-point reports for the k-mode Dicke model.
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "dicke/cli.hpp"
#include "dicke/dicke.hpp"

namespace {

using namespace dicke;

template <class Write>
void to_destination(const std::string& path, Write&& write) {
  if (path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  write(f);
  if (!f) throw IoError("failed writing " + path);
}

int run(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::Help:
      std::cout << cfg.help_text;
      return 0;
    case Command::SelfCheck:
      return print_selfcheck(run_selfcheck(), std::cout) ? 0 : 1;
    case Command::Sweep: {
      const auto grid = make_grid(cfg.from, cfg.to, cfg.step);
      const SweepResult r = run_sweep(cfg.params, cfg.axis, grid, cfg.methods, cfg.sweep_options());
      to_destination(cfg.output, [&](std::ostream& os) { write_sweep_csv(os, r, describe(cfg)); });
      return 0;
    }
    case Command::Point: {
      // One-point sweep along omega_a at its configured value.
      const Axis axis{Axis::Kind::OmegaA, 0};
      const SweepResult r = run_sweep(cfg.params, axis, {cfg.params.omega_a}, cfg.methods, cfg.sweep_options());
      to_destination(cfg.output, [&](std::ostream& os) { write_sweep_csv(os, r, describe(cfg)); });
      return 0;
    }
    case Command::PhaseDiagram: {
      const PhaseDiagram d = phase_boundary(cfg.params, cfg.axis, cfg.y_axis, make_grid(cfg.from, cfg.to, cfg.step),
                                            make_grid(cfg.y_from, cfg.y_to, cfg.y_step));
      to_destination(cfg.output, [&](std::ostream& os) { write_phase_csv(os, d, describe(cfg)); });
      return 0;
    }
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    const RunConfig cfg = parse_args(std::vector<std::string>(argv + 1, argv + argc));
    return run(cfg);
  } catch (const UsageError& e) {
    std::cerr << "dicke_qpt: " << e.what() << "\nrun 'dicke_qpt --help' for usage\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "dicke_qpt: " << e.what() << '\n';
    return 1;
  }
}
