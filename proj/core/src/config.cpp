#include "ccsolid/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "text_io.hpp"

namespace ccsolid {

namespace {

using detail::parse_number;

const char* method_name(SolverOptions::Method m) {
  switch (m) {
    case SolverOptions::Method::Cholesky: return "cholesky";
    case SolverOptions::Method::ConjugateGradient: return "cg";
    case SolverOptions::Method::Dense: return "dense";
  }
  return "cholesky";
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <std::size_t N>
std::array<double, N> parse_numbers(std::string_view value, int line) {
  const auto tokens = split(value);
  if (tokens.size() != N) throw ParseError("expected " + std::to_string(N) + " numbers", line);
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = parse_number<double>(tokens[i], line);
  return out;
}

bool parse_bool(std::string_view value, int line) {
  if (value == "true" || value == "1" || value == "on" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "off" || value == "no") return false;
  throw ParseError("expected a boolean, got '" + std::string(value) + "'", line);
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <std::size_t N>
std::string nums(const std::array<double, N>& xs) {
  std::string out;
  for (std::size_t i = 0; i < N; ++i) out += (i ? " " : "") + num(xs[i]);
  return out;
}

Box to_box(const std::array<double, 6>& b) { return {Vec3(b[0], b[1], b[2]), Vec3(b[3], b[4], b[5])}; }

}  // namespace

void RunConfig::validate() const {
  material().validate();
  optimize_config().beso.validate();
  if (subdivide < 0 || subdivide > 6) throw Error("subdivide must lie in [0, 6]");
  if (refine_at < 0) throw Error("refine_at must be non-negative");
  if (!(tolerance > 0.0)) throw Error("solver tolerance must be positive");
  if (max_iterations < 0) throw Error("max_iterations must be non-negative");
  if (quad_order < 1 || quad_order > 12) throw Error("quad_order must lie in [1, 12]");
  for (const auto& d : dirichlet) {
    if (problem == Problem::Heat ? d.dofs != "t" : d.dofs.find_first_not_of("xyz") != std::string::npos) {
      throw Error("dirichlet dofs '" + d.dofs + "' do not fit the problem type");
    }
  }
  for (const auto& l : loads) {
    if (l.is_source != (problem == Problem::Heat)) throw Error("load kind does not fit the problem type");
  }
}

Material RunConfig::material() const { return Material{E0, nu, p, mu_min}; }

BoundaryConditions RunConfig::boundary_conditions() const {
  BoundaryConditions bcs;
  bcs.heat_source = heat_source;
  for (const auto& d : dirichlet) {
    DirichletSpec spec;
    spec.box = to_box(d.box);
    spec.value = d.value;
    if (d.dofs == "t") {
      spec.components = {true, false, false};
    } else {
      for (int c = 0; c < 3; ++c) spec.components[c] = d.dofs.find("xyz"[c]) != std::string::npos;
    }
    bcs.dirichlet.push_back(spec);
  }
  for (const auto& l : loads) {
    LoadSpec spec;
    spec.box = to_box(l.box);
    spec.vector = l.is_source ? Vec3(l.source, 0, 0) : Vec3(l.vector[0], l.vector[1], l.vector[2]);
    bcs.loads.push_back(spec);
  }
  return bcs;
}

SolverOptions RunConfig::solver() const {
  SolverOptions s;
  s.method = method;
  s.tolerance = tolerance;
  s.max_iterations = max_iterations;
  s.quad_order = quad_order;
  return s;
}

OptimizeConfig RunConfig::optimize_config() const {
  OptimizeConfig cfg;
  cfg.problem = problem;
  cfg.material = material();
  cfg.bcs = boundary_conditions();
  cfg.beso = BesoConfig{v_star, er, rho_min, density_level, filter, max_iters, paper_exact_sensitivity};
  cfg.solver = solver();
  cfg.subdivide = subdivide;
  cfg.refine_at = refine_at;
  return cfg;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::string section;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, end - pos));
    ++number;
    pos = end + 1;
    if (!line.empty() && line[0] != '#') {
      if (line.front() == '[') {
        if (line.back() != ']') throw ParseError("unterminated section header", number);
        section = std::string(trim(line.substr(1, line.size() - 2)));
        if (section == "dirichlet") {
          cfg.dirichlet.emplace_back();
        } else if (section == "load") {
          cfg.loads.emplace_back();
        } else if (section != "problem" && section != "material" && section != "mesh" && section != "beso" &&
                   section != "solver") {
          throw ParseError("unknown section [" + section + "]", number);
        }
      } else {
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", number);
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto real = [&] { return parse_number<double>(value, number); };
        const auto integer = [&] { return parse_number<int>(value, number); };
        bool known = true;
        if (section == "problem") {
          if (key == "type") {
            if (value == "heat") cfg.problem = Problem::Heat;
            else if (value == "elasticity") cfg.problem = Problem::Elasticity;
            else throw ParseError("problem type must be heat or elasticity", number);
          } else if (key == "heat_source") cfg.heat_source = real();
          else known = false;
        } else if (section == "material") {
          if (key == "E0") cfg.E0 = real();
          else if (key == "nu") cfg.nu = real();
          else if (key == "p") cfg.p = real();
          else if (key == "mu_min") cfg.mu_min = real();
          else known = false;
        } else if (section == "mesh") {
          if (key == "subdivide") cfg.subdivide = integer();
          else if (key == "density_level") cfg.density_level = integer();
          else if (key == "refine_at") cfg.refine_at = integer();
          else known = false;
        } else if (section == "beso") {
          if (key == "v_star") cfg.v_star = real();
          else if (key == "er") cfg.er = real();
          else if (key == "rho_min") cfg.rho_min = real();
          else if (key == "filter") cfg.filter = parse_bool(value, number);
          else if (key == "max_iters") cfg.max_iters = integer();
          else if (key == "paper_exact_sensitivity") cfg.paper_exact_sensitivity = parse_bool(value, number);
          else known = false;
        } else if (section == "solver") {
          if (key == "tolerance") cfg.tolerance = real();
          else if (key == "max_iterations") cfg.max_iterations = integer();
          else if (key == "quad_order") cfg.quad_order = integer();
          else if (key == "method") {
            if (value == "cholesky") cfg.method = SolverOptions::Method::Cholesky;
            else if (value == "cg") cfg.method = SolverOptions::Method::ConjugateGradient;
            else if (value == "dense") cfg.method = SolverOptions::Method::Dense;
            else throw ParseError("solver method must be cholesky, cg or dense", number);
          } else known = false;
        } else if (section == "dirichlet") {
          auto& d = cfg.dirichlet.back();
          if (key == "box") d.box = parse_numbers<6>(value, number);
          else if (key == "dofs") {
            d.dofs = std::string(value);
            if (d.dofs.empty() || (d.dofs != "t" && d.dofs.find_first_not_of("xyz") != std::string::npos)) {
              throw ParseError("dofs must be a subset of xyz or t", number);
            }
          } else if (key == "value") d.value = real();
          else known = false;
        } else if (section == "load") {
          auto& l = cfg.loads.back();
          if (key == "box") l.box = parse_numbers<6>(value, number);
          else if (key == "vector") {
            l.vector = parse_numbers<3>(value, number);
            l.is_source = false;
          } else if (key == "source") {
            l.source = real();
            l.is_source = true;
          } else known = false;
        } else {
          throw ParseError("key outside of any section", number);
        }
        if (!known) throw ParseError("unknown key '" + key + "' in [" + section + "]", number);
      }
    }
    if (end == text.size()) break;
  }
  return cfg;
}

RunConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line());
  }
}

std::string format_config(const RunConfig& cfg) {
  std::ostringstream out;
  const auto b = [](bool v) { return v ? "true" : "false"; };
  out << "[problem]\n"
      << "type = " << (cfg.problem == Problem::Heat ? "heat" : "elasticity") << '\n'
      << "heat_source = " << num(cfg.heat_source) << "\n\n"
      << "[material]\n"
      << "E0 = " << num(cfg.E0) << '\n'
      << "nu = " << num(cfg.nu) << '\n'
      << "p = " << num(cfg.p) << '\n'
      << "mu_min = " << num(cfg.mu_min) << "\n\n"
      << "[mesh]\n"
      << "subdivide = " << cfg.subdivide << '\n'
      << "density_level = " << cfg.density_level << '\n'
      << "refine_at = " << cfg.refine_at << "\n\n"
      << "[beso]\n"
      << "v_star = " << num(cfg.v_star) << '\n'
      << "er = " << num(cfg.er) << '\n'
      << "rho_min = " << num(cfg.rho_min) << '\n'
      << "filter = " << b(cfg.filter) << '\n'
      << "max_iters = " << cfg.max_iters << '\n'
      << "paper_exact_sensitivity = " << b(cfg.paper_exact_sensitivity) << "\n\n"
      << "[solver]\n"
      << "tolerance = " << num(cfg.tolerance) << '\n'
      << "max_iterations = " << cfg.max_iterations << '\n'
      << "quad_order = " << cfg.quad_order << '\n'
      << "method = " << method_name(cfg.method) << '\n';
  for (const auto& d : cfg.dirichlet) {
    out << "\n[dirichlet]\n"
        << "box = " << nums(d.box) << '\n'
        << "dofs = " << d.dofs << '\n'
        << "value = " << num(d.value) << '\n';
  }
  for (const auto& l : cfg.loads) {
    out << "\n[load]\n"
        << "box = " << nums(l.box) << '\n';
    if (l.is_source) {
      out << "source = " << num(l.source) << '\n';
    } else {
      out << "vector = " << nums(l.vector) << '\n';
    }
  }
  return out.str();
}

}  // namespace ccsolid
