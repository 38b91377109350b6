#include "memopat/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

namespace memopat {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace((unsigned char)s[a]))
        ++a;
    while (b > a && std::isspace((unsigned char)s[b - 1]))
        --b;
    return s.substr(a, b - a);
}

const std::set<std::string> kCommands = {
    "stability-region", "dispersion", "bifcoef",   "simulate",
    "sweep",            "mass-curve", "verify-equivalence"};

// Every key the parser accepts.  Unknown keys are hard errors so a typo
// cannot silently fall back to a default.
const std::set<std::string> kKnownKeys = {
    "d",          "alpha",      "R",           "growth",       "growth_rate",
    "u_cap",      "u_star",     "encoding",    "rho",          "mu",
    "beta",       "perturbed",  "eps",         "gamma",        "n_cells",
    "dt",         "t_max",      "steady_tol",  "seed",         "perturb_amp",
    "mass_stride", "delta0",    "n_points",    "kick_amp",     "branch",
    "amp_tol",    "threads",    "r_min",       "r_max",        "n_samples",
    "n_max",      "r_values",   "snapshot_stride", "output",   "emit_svg"};

struct KeyValue {
    std::string value;
    int line; // 0 for CLI overrides
};

[[noreturn]] void bad_value(const std::string& key, const KeyValue& kv,
                            const std::string& why) {
    std::ostringstream os;
    os << "invalid value for '" << key << "'";
    if (kv.line > 0)
        os << " (line " << kv.line << ")";
    os << ": '" << kv.value << "' -- " << why;
    throw ValidationError(os.str());
}

class Resolver {
  public:
    explicit Resolver(std::map<std::string, KeyValue> kvs) : kvs_(std::move(kvs)) {}

    double number(const std::string& key, double fallback,
                  double lo = -1e300, double hi = 1e300,
                  bool lo_strict = false) {
        const auto it = kvs_.find(key);
        double v = fallback;
        if (it != kvs_.end()) {
            v = parse_number(key, it->second);
            if (v < lo || v > hi || (lo_strict && v == lo))
                bad_value(key, it->second,
                          lo_strict ? "must be > " + format(lo)
                                    : "must be in [" + format(lo) + ", " +
                                          format(hi) + "]");
        }
        record(key, format(v));
        return v;
    }

    long long integer(const std::string& key, long long fallback, long long lo,
                      long long hi) {
        const auto it = kvs_.find(key);
        long long v = fallback;
        if (it != kvs_.end()) {
            const double x = parse_number(key, it->second);
            v = (long long)x;
            if ((double)v != x)
                bad_value(key, it->second, "must be an integer");
            if (v < lo || v > hi)
                bad_value(key, it->second,
                          "must be an integer in [" + std::to_string(lo) +
                              ", " + std::to_string(hi) + "]");
        }
        record(key, std::to_string(v));
        return v;
    }

    bool flag(const std::string& key, bool fallback) {
        const auto it = kvs_.find(key);
        bool v = fallback;
        if (it != kvs_.end()) {
            const std::string s = it->second.value;
            if (s == "1" || s == "true" || s == "yes")
                v = true;
            else if (s == "0" || s == "false" || s == "no")
                v = false;
            else
                bad_value(key, it->second, "must be a boolean (true/false/1/0)");
        }
        record(key, v ? "true" : "false");
        return v;
    }

    std::string text(const std::string& key, const std::string& fallback) {
        const auto it = kvs_.find(key);
        std::string v = fallback;
        if (it != kvs_.end()) {
            v = it->second.value;
            if (v.empty())
                bad_value(key, it->second, "must be non-empty");
        }
        record(key, v);
        return v;
    }

    std::string word(const std::string& key, const std::string& fallback,
                     const std::set<std::string>& allowed) {
        const auto it = kvs_.find(key);
        std::string v = fallback;
        if (it != kvs_.end()) {
            v = it->second.value;
            if (!allowed.count(v)) {
                std::string opts;
                for (const auto& a : allowed)
                    opts += (opts.empty() ? "" : ", ") + a;
                bad_value(key, it->second, "must be one of {" + opts + "}");
            }
        }
        record(key, v);
        return v;
    }

    std::vector<double> number_list(const std::string& key,
                                    std::vector<double> fallback, double lo) {
        const auto it = kvs_.find(key);
        std::vector<double> v = std::move(fallback);
        if (it != kvs_.end()) {
            v.clear();
            std::stringstream ss(it->second.value);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                tok = trim(tok);
                if (tok.empty())
                    bad_value(key, it->second, "empty list element");
                KeyValue elem{tok, it->second.line};
                const double x = parse_number(key, elem);
                if (x <= lo)
                    bad_value(key, it->second,
                              "elements must be > " + format(lo));
                v.push_back(x);
            }
            if (v.empty())
                bad_value(key, it->second, "list is empty");
        }
        std::string joined;
        for (double x : v)
            joined += (joined.empty() ? "" : ",") + format(x);
        record(key, joined);
        return v;
    }

    bool present(const std::string& key) const { return kvs_.count(key) > 0; }

    std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
        const auto it = kvs_.find(key);
        std::uint64_t v = fallback;
        if (it != kvs_.end()) {
            const std::string& s = it->second.value;
            char* end = nullptr;
            errno = 0;
            const unsigned long long parsed = std::strtoull(s.c_str(), &end, 10);
            if (errno != 0 || end == s.c_str() || *end != '\0')
                bad_value(key, it->second, "must be a non-negative integer seed");
            v = parsed;
        }
        record(key, std::to_string(v));
        return v;
    }

    const std::vector<std::pair<std::string, std::string>>& resolved() const {
        return resolved_;
    }

  private:
    static std::string format(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return buf;
    }

    double parse_number(const std::string& key, const KeyValue& kv) {
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(kv.value.c_str(), &end);
        if (errno != 0 || end == kv.value.c_str() || *end != '\0')
            bad_value(key, kv, "not a number");
        return v;
    }

    void record(const std::string& key, const std::string& value) {
        resolved_.emplace_back(key, value);
    }

    std::map<std::string, KeyValue> kvs_;
    std::vector<std::pair<std::string, std::string>> resolved_;
};

} // namespace

bool is_known_command(const std::string& command) {
    return kCommands.count(command) > 0;
}

RunConfig parse_config(const std::string& text, const std::string& command,
                       const std::vector<std::pair<std::string, std::string>>&
                           overrides) {
    if (!is_known_command(command))
        throw ValidationError("unknown command '" + command + "'");

    std::map<std::string, KeyValue> kvs;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError("line " + std::to_string(lineno) + ": empty key");
        if (!kKnownKeys.count(key))
            throw UnknownKey("unknown key '" + key + "' (line " +
                             std::to_string(lineno) + ")");
        if (kvs.count(key))
            throw ParseError("duplicate key '" + key + "' (line " +
                             std::to_string(lineno) + ")");
        kvs[key] = {value, lineno};
    }
    for (const auto& [key, value] : overrides) {
        if (!kKnownKeys.count(key))
            throw UnknownKey("unknown key '" + key + "' (command line)");
        kvs[key] = {value, 0}; // flags win over the file
    }

    Resolver r(std::move(kvs));
    RunConfig cfg;
    cfg.command = command;

    // --- model ---
    cfg.spec.d = r.number("d", 1.0, 0.0, 1e300, /*lo_strict=*/true);
    cfg.spec.alpha = r.number("alpha", 0.0);
    cfg.spec.R = r.number("R", 1.0, 0.0, 1e300, true);
    const std::string growth =
        r.word("growth", "nogrowth", {"logistic", "nogrowth"});
    const double growth_rate = r.number("growth_rate", 1.0, 0.0, 1e300, true);
    const double u_cap = r.number("u_cap", 1.0, 0.0, 1e300, true);
    cfg.spec.growth = growth == "logistic" ? GrowthModel::logistic(growth_rate, u_cap)
                                           : GrowthModel::no_growth();
    if (r.present("u_star")) {
        cfg.spec.u_star_override = r.number("u_star", 1.0, 0.0, 1e300, true);
    }
    const std::string enc =
        r.word("encoding", "ratio_quadratic", {"ratio_quadratic", "ratio_linear"});
    cfg.spec.encoding.g1_kind = enc == "ratio_quadratic"
                                    ? EncodingFamily::G1::RatioQuadratic
                                    : EncodingFamily::G1::RatioLinear;
    cfg.spec.encoding.rho = r.number("rho", 1.0, 0.0, 1e300, true);
    cfg.spec.encoding.mu = r.number("mu", 0.15, 0.0, 1e300, true);
    cfg.spec.encoding.beta = r.number("beta", 0.5, 0.0);
    cfg.spec.encoding.perturbed = r.flag("perturbed", false);
    cfg.spec.encoding.eps = r.number("eps", 0.05, 0.0, 1.0, true);
    cfg.spec.encoding.gamma = r.number("gamma", 10.0, 1.0, 1e300, true);

    // --- solver ---
    cfg.solver.n_cells = (int)r.integer("n_cells", 256, 8, 1 << 20);
    if (cfg.solver.n_cells % 2 != 0)
        throw ValidationError("invalid value for 'n_cells': must be even");
    cfg.solver.dt = r.number("dt", 1e-3, 0.0, 1e300, true);
    cfg.solver.t_max = r.number("t_max", 2000.0, 0.0, 1e300, true);
    cfg.solver.steady_tol = r.number("steady_tol", 1e-8, 0.0, 1e300, true);
    cfg.solver.seed = r.seed("seed", 0);
    cfg.solver.perturb_amp = r.number("perturb_amp", 0.01, 0.0);
    cfg.solver.mass_stride = (int)r.integer("mass_stride", 1000, 1, 1 << 30);

    // --- sweep & friends ---
    cfg.delta0 = r.number("delta0", 0.0, 0.0);
    cfg.n_points = (int)r.integer("n_points", 50, 2, 100000);
    cfg.kick_amp = r.number("kick_amp", 0.5, 0.0);
    cfg.branch = r.word("branch", "both", {"both", "perturbation", "continuation"});
    cfg.amp_tol = r.number("amp_tol", 0.05, 0.0, 1e300, true);
    cfg.threads = (int)r.integer("threads", 1, 1, 256);

    cfg.r_min = r.number("r_min", 0.05, 0.0, 1e300, true);
    cfg.r_max = r.number("r_max", 2.5, 0.0, 1e300, true);
    if (cfg.r_max < cfg.r_min)
        throw ValidationError("invalid value for 'r_max': must be >= r_min");
    cfg.n_samples = (int)r.integer("n_samples", 50, 1, 100000);
    cfg.n_max = (int)r.integer("n_max", 64, 1, 4096);

    cfg.r_values = r.number_list("r_values", {0.3, 2.0}, 0.0);
    cfg.snapshot_stride = (int)r.integer("snapshot_stride", 0, 0, 1 << 30);

    cfg.output_dir = r.text("output", "out");
    cfg.emit_svg = r.flag("emit_svg", false);

    // --- command-specific validation ---
    const bool needs_model = command != "verify-equivalence";
    if (needs_model) {
        try {
            (void)constant_state_density(cfg.spec);
        } catch (const NoConstantState&) {
            throw ValidationError(
                "command '" + command + "' needs a constant state: set "
                "growth = logistic or provide u_star (for nogrowth, u_star "
                "is the intended mean of the initial density)");
        }
    }
    if (command == "mass-curve" &&
        cfg.spec.growth.kind != GrowthModel::Kind::Logistic)
        throw ValidationError("mass-curve requires growth = logistic");

    cfg.resolved = r.resolved();
    return cfg;
}

} // namespace memopat
