#include "runspec.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "escort/error.hpp"

namespace escort::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Real to_real(const std::string& v, std::size_t line) {
  try {
    std::size_t used = 0;
    const Real x = std::stold(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": expected a number, got '" + v + "'");
}

long long to_int(const std::string& v, std::size_t line) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": expected an integer, got '" + v + "'");
}

std::string real_text(Real x) {
  std::ostringstream os;
  os.precision(std::numeric_limits<Real>::max_digits10);
  os << x;
  return os.str();
}

}  // namespace

MonicPolynomial RunSpec::map_polynomial() const {
  if (polynomial) return *polynomial;
  return MonicPolynomial(std::vector<Complex>(static_cast<std::size_t>(degree), Complex(0)));
}

bool RunSpec::operator==(const RunSpec& o) const {
  auto same_pots = [](const std::vector<PotentialRep>& a, const std::vector<PotentialRep>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!(a[i] == b[i])) return false;
    return true;
  };
  return command == o.command && degree == o.degree && polynomial == o.polynomial && addresses == o.addresses &&
         same_pots(potentials, o.potentials) && t_hi.has_value() == o.t_hi.has_value() &&
         (!t_hi || *t_hi == *o.t_hi) && count == o.count && trace_depth == o.trace_depth &&
         numeric_depth == o.numeric_depth && total_depth == o.total_depth && tolerance == o.tolerance &&
         max_iter == o.max_iter && A == o.A && C == o.C && L == o.L && K == o.K && rho == o.rho &&
         samples == o.samples && seed == o.seed && point == o.point && horizon == o.horizon &&
         escape_re == o.escape_re;
}

RunSpec parse_spec(std::string_view text) {
  RunSpec spec;
  std::vector<std::pair<std::string, std::size_t>> potentials;
  std::optional<std::pair<std::string, std::size_t>> t_hi;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  bool have_command = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": expected 'key = value'");
    const std::string key(trim(s.substr(0, eq)));
    const std::string value(trim(s.substr(eq + 1)));
    auto wrap = [&](auto&& fn) {
      try {
        fn();
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Parse && std::string(e.what()).find("line ") != std::string::npos) throw;
        throw Error(ErrorKind::Parse, "line " + std::to_string(line) + " (" + key + "): " + e.what());
      }
    };
    if (key == "command") {
      spec.command = value;
      have_command = true;
    } else if (key == "degree") {
      spec.degree = static_cast<int>(to_int(value, line));
    } else if (key == "polynomial") {
      wrap([&] { spec.polynomial = MonicPolynomial::parse(value); });
    } else if (key == "address") {
      wrap([&] { spec.addresses.push_back(ExternalAddress::parse(value)); });
    } else if (key == "potential") {
      potentials.emplace_back(value, line);
    } else if (key == "t_hi") {
      t_hi = std::make_pair(value, line);
    } else if (key == "count") {
      spec.count = static_cast<int>(to_int(value, line));
    } else if (key == "trace_depth") {
      spec.trace_depth = static_cast<int>(to_int(value, line));
    } else if (key == "numeric_depth") {
      spec.numeric_depth = static_cast<int>(to_int(value, line));
    } else if (key == "total_depth") {
      spec.total_depth = static_cast<int>(to_int(value, line));
    } else if (key == "tolerance") {
      spec.tolerance = to_real(value, line);
    } else if (key == "max_iter") {
      spec.max_iter = static_cast<int>(to_int(value, line));
    } else if (key == "A") {
      spec.A = to_real(value, line);
    } else if (key == "C") {
      spec.C = to_real(value, line);
    } else if (key == "L") {
      spec.L = to_real(value, line);
    } else if (key == "K") {
      spec.K = to_real(value, line);
    } else if (key == "rho") {
      spec.rho = to_real(value, line);
    } else if (key == "samples") {
      spec.samples = static_cast<int>(to_int(value, line));
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(to_int(value, line));
    } else if (key == "point") {
      const auto comma = value.find(',');
      if (comma == std::string::npos)
        throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": point needs 're,im'");
      spec.point = Complex(to_real(std::string(trim(value.substr(0, comma))), line),
                           to_real(std::string(trim(value.substr(comma + 1))), line));
    } else if (key == "horizon") {
      spec.horizon = static_cast<int>(to_int(value, line));
    } else if (key == "escape_re") {
      spec.escape_re = to_real(value, line);
    } else {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }

  std::vector<std::string> problems;
  if (!have_command) problems.push_back("missing 'command'");
  if (have_command && std::find(kCommands.begin(), kCommands.end(), spec.command) == kCommands.end()) {
    std::string list;
    for (const auto& c : kCommands) list += (list.empty() ? "" : ", ") + c;
    problems.push_back("unknown command '" + spec.command + "' (valid: " + list + ")");
  }
  if (spec.degree < 1) throw Error(ErrorKind::Validation, "degree must be >= 1");
  for (const auto& [value, at] : potentials) {
    try {
      spec.potentials.push_back(PotentialRep::parse(value, spec.degree));
    } catch (const Error& e) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(at) + " (potential): " + e.what());
    }
  }
  if (t_hi) {
    try {
      spec.t_hi = PotentialRep::parse(t_hi->first, spec.degree);
    } catch (const Error& e) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(t_hi->second) + " (t_hi): " + e.what());
    }
  }
  if (spec.polynomial && spec.polynomial->degree() != spec.degree)
    problems.push_back("polynomial degree " + std::to_string(spec.polynomial->degree()) + " differs from degree " +
                       std::to_string(spec.degree));
  const bool orbits = spec.command == "trace-ray" || spec.command == "clusters" || spec.command == "solve" ||
                      spec.command == "check-invariant" || spec.command == "plot";
  if (orbits) {
    if (spec.addresses.empty()) problems.push_back("command needs at least one 'address'");
    if (spec.addresses.size() != spec.potentials.size())
      problems.push_back("need one 'potential' per 'address' (" + std::to_string(spec.addresses.size()) + " vs " +
                         std::to_string(spec.potentials.size()) + ")");
  }
  if ((spec.command == "solve" || spec.command == "check-invariant") &&
      static_cast<int>(spec.addresses.size()) != spec.degree)
    problems.push_back("solve needs exactly d orbits (one asymptotic, d - 1 critical)");
  for (std::size_t i = 0; i < std::min(spec.addresses.size(), spec.potentials.size()); ++i) {
    const auto& a = spec.addresses[i];
    const Real ts = minimal_potential(a, spec.degree, std::min<std::size_t>(a.depth(), 64));
    const auto& t = spec.potentials[i];
    if (t.is_zero() || (t.raw_representable() && !(t.raw() > ts)))
      problems.push_back("potential " + t.to_string() + " of orbit " + std::to_string(i) +
                         " is not above minimal_potential = " + real_text(ts));
  }
  if (spec.count < 2) problems.push_back("count must be >= 2");
  if (spec.samples < 0) problems.push_back("samples must be >= 0");
  if (spec.numeric_depth < 1 || spec.total_depth < spec.numeric_depth)
    problems.push_back("need 1 <= numeric_depth <= total_depth");
  if (!(spec.tolerance > 0)) problems.push_back("tolerance must be positive");
  if (spec.horizon < 1) problems.push_back("horizon must be >= 1");
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw Error(ErrorKind::Validation, msg);
  }
  return spec;
}

std::string print_spec(const RunSpec& spec) {
  std::ostringstream os;
  os << "command = " << spec.command << '\n';
  os << "degree = " << spec.degree << '\n';
  if (spec.polynomial) os << "polynomial = " << spec.polynomial->to_string() << '\n';
  for (const auto& a : spec.addresses) os << "address = " << a.to_string() << '\n';
  for (const auto& t : spec.potentials) os << "potential = " << t.to_string() << '\n';
  if (spec.t_hi) os << "t_hi = " << spec.t_hi->to_string() << '\n';
  os << "count = " << spec.count << '\n';
  os << "trace_depth = " << spec.trace_depth << '\n';
  os << "numeric_depth = " << spec.numeric_depth << '\n';
  os << "total_depth = " << spec.total_depth << '\n';
  os << "tolerance = " << real_text(spec.tolerance) << '\n';
  os << "max_iter = " << spec.max_iter << '\n';
  os << "A = " << real_text(spec.A) << '\n';
  os << "C = " << real_text(spec.C) << '\n';
  if (spec.L) os << "L = " << real_text(*spec.L) << '\n';
  if (spec.K) os << "K = " << real_text(*spec.K) << '\n';
  if (spec.rho) os << "rho = " << real_text(*spec.rho) << '\n';
  os << "samples = " << spec.samples << '\n';
  os << "seed = " << spec.seed << '\n';
  os << "point = " << real_text(spec.point.real()) << ',' << real_text(spec.point.imag()) << '\n';
  os << "horizon = " << spec.horizon << '\n';
  os << "escape_re = " << real_text(spec.escape_re) << '\n';
  return os.str();
}

}  // namespace escort::cli
