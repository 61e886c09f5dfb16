#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "meissner/cli.hpp"
#include "meissner/error.hpp"
#include "meissner/suite.hpp"
#include "meissner/validation.hpp"

namespace meissner::cli {
namespace {

using nlohmann::json;

RunConfig resolve(const CommandOptions& opts) {
  if (!opts.config_path) return RunConfig{};
  return load_config(*opts.config_path);
}

std::filesystem::path output_file(const CommandOptions& opts, const std::string& name) {
  std::error_code ec;
  const std::string dir = opts.out_dir.value_or(".");
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  return std::filesystem::path(dir) / name;
}

// Maps the exception families onto exit codes; the body returns the code
// for the success path.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const DegenerateGeometryError& e) {
    err << "degenerate anchor: " << e.what() << '\n';
    return exit_config_error;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return exit_config_error;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return exit_io_error;
  }
}

std::string fixed(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

// RMS over interior samples at least one stencil width from the surface of
// |lap B - B/lambda^2| lambda^2 / |B0|.
double interior_london_residual(const CylinderGeometry& geom, BackgroundField b0,
                                const std::vector<FieldSample>& samples) {
  const double lambda = geom.lambda();
  const double h = lambda / 50.0;
  const double scale = b0.magnitude();
  if (scale == 0.0) return 0.0;
  const auto field = [&](FieldPoint p) { return field_inside(geom, b0, p); };
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& s : samples) {
    if (s.region != Region::inside || s.point.radius() > geom.r0() - 2.0 * h) continue;
    const FieldVector lap = validation::finite_difference_laplacian(field, s.point, h);
    const FieldVector residual = lap - (1.0 / (lambda * lambda)) * s.field;
    const double r = residual.magnitude() * lambda * lambda / scale;
    sum += r * r;
    ++count;
  }
  return count == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(count));
}

AccelerationVector full_acceleration(const RunConfig& cfg) {
  const auto g = induced_accelerations(cfg.geometry(), cfg.b0, cfg.anchor, cfg.atom, cfg.convention);
  return {g.gx, g.gy, cfg.gz};
}

}  // namespace

void write_field_map_csv(std::ostream& out, const std::vector<FieldSample>& samples) {
  out << "x,y,Bx,By,region\n";
  char line[160];
  for (const auto& s : samples) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%s\n", s.point.x, s.point.y, s.field.bx, s.field.by,
                  region_name(s.region));
    out << line;
  }
}

int cmd_field_map(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = resolve(opts);
    const CylinderGeometry geom = cfg.geometry();
    const auto samples = field_map(geom, cfg.b0, cfg.grid);

    const auto path = output_file(opts, "field_map.csv");
    {
      std::ofstream csv(path, std::ios::binary);
      if (!csv) throw IoError("cannot open " + path.string() + " for writing");
      write_field_map_csv(csv, samples);
      if (!csv.flush()) throw IoError("write failed for " + path.string());
    }

    double min_b = samples.empty() ? 0.0 : samples.front().field.magnitude();
    double max_b = 0.0, interior_max = 0.0;
    std::size_t interior = 0;
    for (const auto& s : samples) {
      const double m = s.field.magnitude();
      min_b = std::min(min_b, m);
      max_b = std::max(max_b, m);
      if (s.region == Region::inside) {
        ++interior;
        interior_max = std::max(interior_max, m);
      }
    }
    const json summary = {
        {"csv", path.string()},
        {"points", samples.size()},
        {"min_abs_b", min_b},
        {"max_abs_b", max_b},
        {"interior_points", interior},
        {"interior_max_abs_b", interior_max},
        {"interior_residual_norm", interior_london_residual(geom, cfg.b0, samples)},
    };
    out << summary.dump(2) << '\n';
    err << "wrote " << samples.size() << " samples to " << path.string() << '\n';
    return static_cast<int>(exit_ok);
  });
}

int cmd_phase(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = resolve(opts);
    const AccelerationVector g = full_acceleration(cfg);
    const double phase = mz_phase(cfg.pulses, g);
    const json result = {
        {"kx", cfg.pulses.kx},
        {"ky", cfg.pulses.ky},
        {"t", cfg.pulses.t_sep},
        {"gx", g.gx},
        {"gy", g.gy},
        {"gz", g.gz},
        {"phase_rad", phase},
        {"probability", fringe_probability(phase)},
        {"separation_m", beam_separation(cfg.pulses, cfg.atom.mass)},
    };
    out << result.dump(2) << '\n';
    err << "phase " << fixed("%.6g", phase) << " rad from gx = " << fixed("%.6g", g.gx)
        << " m/s^2, gy = " << fixed("%.6g", g.gy) << " m/s^2\n";
    return static_cast<int>(exit_ok);
  });
}

int cmd_sensitivity(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = resolve(opts);
    const SensitivityReport r =
        sensitivity_report(cfg.geometry(), cfg.anchor, cfg.atom, cfg.b0, cfg.dg, cfg.limits, cfg.convention);
    json report = {
        {"anchor", {{"x0", r.anchor.x0}, {"y0", r.anchor.y0}}},
        {"geometry", {{"r0", r.r0}, {"lambda", r.lambda}}},
        {"gammas", {{"g1", r.gammas.g1}, {"g2", r.gammas.g2}, {"g3", r.gammas.g3}, {"g4", r.gammas.g4}}},
        {"accelerations", {{"gx", r.accelerations.gx}, {"gy", r.accelerations.gy}}},
        {"uncertainty",
         {{"dgx", r.dg.dgx},
          {"dgy", r.dg.dgy},
          {"db0x", r.db0x},
          {"db0y", r.db0y},
          {"db0x_quadrature", r.db0x_quadrature},
          {"db0y_quadrature", r.db0y_quadrature}}},
        {"condition_number", r.condition_number},
        {"estimate", {{"b0x", r.b0x_est}, {"b0y", r.b0y_est}}},
        {"warnings", r.warnings},
    };
    out << report.dump(2) << '\n';
    for (const auto& w : r.warnings) err << "warning: " << w << '\n';
    err << "dB0x = " << fixed("%.4g", r.db0x) << " T, dB0y = " << fixed("%.4g", r.db0y)
        << " T (condition number " << fixed("%.4g", r.condition_number) << ")\n";
    return static_cast<int>(exit_ok);
  });
}

int cmd_validate(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    // The checks run on fixed reference configurations; a supplied config is
    // still parsed so that a broken file is reported.
    if (opts.config_path) (void)load_config(*opts.config_path);
    suite::SuiteOptions so;
    so.fast = opts.fast;
    json checks = json::array();
    bool all = true;
    for (const auto& id : suite::check_ids()) {
      const auto r = suite::run_check(id, so);
      all = all && r.passed;
      err << (r.passed ? "PASS " : "FAIL ") << r.id << "  " << r.name << "  (" << fixed("%.2f", r.seconds) << " s)\n"
          << "     " << r.detail << '\n';
      checks.push_back({{"id", r.id},
                        {"name", r.name},
                        {"passed", r.passed},
                        {"measured", r.measured},
                        {"threshold", r.threshold},
                        {"seconds", r.seconds},
                        {"time_limit", r.time_limit},
                        {"detail", r.detail}});
    }
    if (opts.out_dir) {
      // Oracle dumps for offline inspection.
      const CylinderGeometry geom(0.01, 1e-4);
      validation::AnnulusMesh mesh = validation::AnnulusMesh::with_defaults(geom);
      mesh.n_r = 200;
      const auto relax = validation::numeric_relax_solver(mesh, {5e-5, 5e-5});
      const auto relax_path = output_file(opts, "relax.csv");
      const auto packet = PacketParams::minimum_uncertainty(1e-6, constants::rb87_mass, 0.029);
      validation::WaveGrid grid;
      grid.x_min = -2.5e-5;
      grid.x_max = 2.5e-5;
      grid.n_points = 1u << 12;
      const auto psi0 = validation::sample([&](double x) { return gaussian_packet_canonical(x, 0.0, packet); }, grid);
      const auto psi = validation::split_step_evolve(psi0, packet.accel, grid, 1e-3);
      const auto wave_path = output_file(opts, "wave.csv");
      try {
        validation::write_relax_csv(relax_path.string(), relax);
        validation::write_wave_csv(wave_path.string(), psi, grid);
      } catch (const std::runtime_error& e) {
        throw IoError(e.what());
      }
      err << "oracle dumps in " << relax_path.parent_path().string() << '\n';
    }
    const json report = {{"fast", opts.fast}, {"passed", all}, {"checks", checks}};
    out << report.dump(2) << '\n';
    err << (all ? "all checks passed\n" : "some checks failed\n");
    return static_cast<int>(all ? exit_ok : exit_validation_failed);
  });
}

}  // namespace meissner::cli
