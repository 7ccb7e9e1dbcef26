#pragma once

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ergolab/format.hpp"
#include "ergolab/potentials.hpp"

namespace ergolab {

enum class ExperimentKind {
    LyapunovScan,
    MFunction,
    Measure,
    CouplingSweep,
    Approximation,
    ScWeight,
    HarmonicCheck,
};

inline const char* kind_name(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::LyapunovScan: return "lyapunov-scan";
    case ExperimentKind::MFunction: return "m-function";
    case ExperimentKind::Measure: return "measure";
    case ExperimentKind::CouplingSweep: return "coupling-sweep";
    case ExperimentKind::Approximation: return "approximation";
    case ExperimentKind::ScWeight: return "sc-weight";
    case ExperimentKind::HarmonicCheck: return "harmonic-check";
    }
    return "?";
}

inline std::optional<ExperimentKind> kind_from_name(const std::string& s) {
    for (ExperimentKind k :
         {ExperimentKind::LyapunovScan, ExperimentKind::MFunction,
          ExperimentKind::Measure, ExperimentKind::CouplingSweep,
          ExperimentKind::Approximation, ExperimentKind::ScWeight,
          ExperimentKind::HarmonicCheck})
        if (s == kind_name(k)) return k;
    return std::nullopt;
}

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Full experiment description.  Every field has a default; the canonical
// emitted form writes all of them, so emit -> parse -> emit is a fixed point.
struct RunConfig {
    ExperimentKind kind = ExperimentKind::LyapunovScan;
    std::uint64_t seed = 0;
    unsigned threads = 0; // 0 = hardware concurrency
    std::string out_dir = "out";
    std::vector<double> alphas{(std::sqrt(5.0) - 1.0) / 2.0}; // rotation vector
    std::optional<SamplingFunction> function;

    std::optional<double> grid_lo, grid_hi; // unset = [-2-C, 2+C]
    int grid_count = 400;

    long long N = 100000;
    int orbits = 8;
    double delta_gamma = 0.05; // 0 = automatic threshold

    double scan_im = 0.0; // imaginary offset for lyapunov-scan energies

    double energy_re = 0.0, energy_im = 1.0;
    long long mfun_max_iter = 10000;
    double mfun_tol = 1e-12;
    int samples = 256;

    double coupling_Lambda = 2.0;
    int coupling_lambda_count = 16;

    int approx_k = 64;
    std::vector<long long> approx_schedule = {16, 64, 256, 1024};
    long long approx_n0 = 0; // 0 = minimal legal offset
    long long approx_horizon = 1000;
    int l1_resolution = 2000;

    double harmonic_center_re = 0.0, harmonic_center_im = 2.0;
    double harmonic_radius = 1.0;
    int harmonic_K = 64;

    int sc_count = 200;
    double sc_C = -1.0; // < 0: take C from the function (or 0 without one)

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct KvDoc {
    std::vector<std::string> keys, vals;
    std::vector<char> used;

    int find(const std::string& k) const {
        for (std::size_t i = 0; i < keys.size(); ++i)
            if (keys[i] == k) return int(i);
        return -1;
    }

    void set(const std::string& k, const std::string& v) {
        int i = find(k);
        if (i >= 0) {
            vals[std::size_t(i)] = v;
        } else {
            keys.push_back(k);
            vals.push_back(v);
            used.push_back(0);
        }
    }

    std::optional<std::string> take(const std::string& k) {
        int i = find(k);
        if (i < 0) return std::nullopt;
        used[std::size_t(i)] = 1;
        return vals[std::size_t(i)];
    }

    bool has_unused_prefix(const std::string& prefix) const {
        for (std::size_t i = 0; i < keys.size(); ++i)
            if (!used[i] && keys[i].rfind(prefix, 0) == 0) return true;
        return false;
    }

    std::vector<std::string> unused() const {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < keys.size(); ++i)
            if (!used[i]) out.push_back(keys[i]);
        return out;
    }
};

inline KvDoc tokenize_config(const std::string& text) {
    KvDoc doc;
    std::size_t pos = 0;
    int lineno = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(
            pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = (nl == std::string::npos) ? text.size() + 1 : nl + 1;
        ++lineno;

        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        std::string k = trim(line.substr(0, eq));
        std::string v = trim(line.substr(eq + 1));
        if (k.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (doc.find(k) >= 0)
            throw ConfigError("duplicate key: " + k);
        doc.set(k, v);
    }
    return doc;
}

inline double req_double(const std::string& v, const std::string& key) {
    const char* b = v.c_str();
    char* e = nullptr;
    errno = 0;
    double x = std::strtod(b, &e);
    if (e == b || *e != '\0')
        throw ConfigError("field " + key + ": not a number: '" + v + "'");
    if (!std::isfinite(x))
        throw ConfigError("field " + key + ": value must be finite");
    return x;
}

inline long long req_ll(const std::string& v, const std::string& key) {
    const char* b = v.c_str();
    char* e = nullptr;
    errno = 0;
    long long x = std::strtoll(b, &e, 10);
    if (e == b || *e != '\0' || errno == ERANGE)
        throw ConfigError("field " + key + ": not an integer: '" + v + "'");
    return x;
}

inline std::uint64_t req_u64(const std::string& v, const std::string& key) {
    std::string t = trim(v);
    if (!t.empty() && t[0] == '-')
        throw ConfigError("field " + key + ": must be a nonnegative integer");
    const char* b = t.c_str();
    char* e = nullptr;
    errno = 0;
    unsigned long long x = std::strtoull(b, &e, 10);
    if (e == b || *e != '\0' || errno == ERANGE)
        throw ConfigError("field " + key + ": not an integer: '" + v + "'");
    return x;
}

inline std::vector<std::string> split_list(const std::string& v,
                                           const std::string& key) {
    std::vector<std::string> out;
    std::string t = trim(v);
    if (t.empty()) return out;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = t.find(',', pos);
        std::string item = trim(
            t.substr(pos, comma == std::string::npos ? std::string::npos
                                                     : comma - pos));
        if (item.empty())
            throw ConfigError("field " + key + ": empty list element");
        out.push_back(item);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline std::vector<double> req_double_list(const std::string& v,
                                           const std::string& key) {
    std::vector<double> out;
    for (const auto& s : split_list(v, key)) out.push_back(req_double(s, key));
    return out;
}

inline std::vector<long long> req_ll_list(const std::string& v,
                                          const std::string& key) {
    std::vector<long long> out;
    for (const auto& s : split_list(v, key)) out.push_back(req_ll(s, key));
    return out;
}

inline void check(bool ok, const std::string& key,
                  const std::string& constraint) {
    if (!ok) throw ConfigError("field " + key + ": " + constraint);
}

inline std::string join17(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += fmt17(xs[i]);
    }
    return out;
}

inline std::string join_ll(const std::vector<long long>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(xs[i]);
    }
    return out;
}

} // namespace detail

// ---- function spec <-> key-value ------------------------------------------

inline std::optional<SamplingFunction>
parse_function_spec(detail::KvDoc& doc, const std::string& prefix) {
    auto variant = doc.take(prefix + "variant");
    if (!variant) {
        if (doc.has_unused_prefix(prefix))
            throw ConfigError("missing field: " + prefix + "variant");
        return std::nullopt;
    }

    auto take_dlist = [&](const std::string& name,
                          bool& present) -> std::vector<double> {
        auto v = doc.take(prefix + name);
        present = v.has_value();
        if (!v) return {};
        return detail::req_double_list(*v, prefix + name);
    };

    try {
        if (*variant == "trigpoly") {
            TrigPoly t;
            if (auto c = doc.take(prefix + "constant"))
                t.constant = detail::req_double(*c, prefix + "constant");
            bool p1c, p1s, p2c, p2s, p3c, p3s;
            std::vector<double> c1 = take_dlist("cos", p1c);
            std::vector<double> s1 = take_dlist("sin", p1s);
            std::vector<double> c2 = take_dlist("cos2", p2c);
            std::vector<double> s2 = take_dlist("sin2", p2s);
            std::vector<double> c3 = take_dlist("cos3", p3c);
            std::vector<double> s3 = take_dlist("sin3", p3s);
            int d = 1;
            if (p2c || p2s) d = 2;
            if (p3c || p3s) d = 3;
            t.cos_coeffs = {c1};
            t.sin_coeffs = {s1};
            if (d >= 2) {
                t.cos_coeffs.push_back(c2);
                t.sin_coeffs.push_back(s2);
            }
            if (d >= 3) {
                t.cos_coeffs.push_back(c3);
                t.sin_coeffs.push_back(s3);
            }
            SamplingFunction f{t};
            validate(f);
            return f;
        }
        if (*variant == "step") {
            auto b = doc.take(prefix + "breakpoints");
            auto v = doc.take(prefix + "values");
            if (!b) throw ConfigError("missing field: " + prefix + "breakpoints");
            if (!v) throw ConfigError("missing field: " + prefix + "values");
            SamplingFunction f{StepFunction{
                detail::req_double_list(*b, prefix + "breakpoints"),
                detail::req_double_list(*v, prefix + "values")}};
            validate(f);
            return f;
        }
        if (*variant == "mollified") {
            auto n = doc.take(prefix + "n");
            auto n0 = doc.take(prefix + "n0");
            if (!n) throw ConfigError("missing field: " + prefix + "n");
            if (!n0) throw ConfigError("missing field: " + prefix + "n0");
            auto inner = parse_function_spec(doc, prefix + "inner.");
            if (!inner)
                throw ConfigError("missing field: " + prefix + "inner.variant");
            const StepFunction* s = std::get_if<StepFunction>(&inner->v);
            if (!s)
                throw ConfigError("field " + prefix +
                                  "inner.variant: mollified inner must be a "
                                  "step function");
            return mollify(*s, detail::req_ll(*n, prefix + "n"),
                           detail::req_ll(*n0, prefix + "n0"));
        }
        if (*variant == "scaled") {
            auto fac = doc.take(prefix + "factor");
            if (!fac) throw ConfigError("missing field: " + prefix + "factor");
            auto inner = parse_function_spec(doc, prefix + "inner.");
            if (!inner)
                throw ConfigError("missing field: " + prefix + "inner.variant");
            return scaled(std::move(*inner),
                          detail::req_double(*fac, prefix + "factor"));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError("field " + prefix + "variant: " + e.what());
    }
    throw ConfigError("field " + prefix + "variant: unknown variant '" +
                      *variant +
                      "' (expected trigpoly, step, mollified or scaled)");
}

inline void emit_function_spec(std::string& out, const SamplingFunction& f,
                               const std::string& prefix) {
    struct V {
        std::string& out;
        const std::string& prefix;
        void operator()(const TrigPoly& t) const {
            out += prefix + "variant = trigpoly\n";
            out += prefix + "constant = " + fmt17(t.constant) + "\n";
            static const char* cn[] = {"cos", "cos2", "cos3"};
            static const char* sn[] = {"sin", "sin2", "sin3"};
            std::size_t d = std::max<std::size_t>(1, t.cos_coeffs.size());
            for (std::size_t i = 0; i < d; ++i) {
                std::vector<double> c =
                    i < t.cos_coeffs.size() ? t.cos_coeffs[i]
                                            : std::vector<double>{};
                std::vector<double> s =
                    i < t.sin_coeffs.size() ? t.sin_coeffs[i]
                                            : std::vector<double>{};
                out += prefix + cn[i] + " = " + detail::join17(c) + "\n";
                out += prefix + sn[i] + " = " + detail::join17(s) + "\n";
            }
        }
        void operator()(const StepFunction& s) const {
            out += prefix + "variant = step\n";
            out += prefix + "breakpoints = " + detail::join17(s.breakpoints) + "\n";
            out += prefix + "values = " + detail::join17(s.values) + "\n";
        }
        void operator()(const Mollified& m) const {
            out += prefix + "variant = mollified\n";
            out += prefix + "n = " + std::to_string(m.n) + "\n";
            out += prefix + "n0 = " + std::to_string(m.n0) + "\n";
            emit_function_spec(out, SamplingFunction{m.base}, prefix + "inner.");
        }
        void operator()(const Scaled& s) const {
            out += prefix + "variant = scaled\n";
            out += prefix + "factor = " + fmt17(s.factor) + "\n";
            emit_function_spec(out, *s.inner, prefix + "inner.");
        }
    };
    std::visit(V{out, prefix}, f.v);
}

// ---- whole config ---------------------------------------------------------

inline RunConfig parse_config(
    const std::string& text,
    const std::vector<std::pair<std::string, std::string>>& overrides = {}) {
    detail::KvDoc doc = detail::tokenize_config(text);
    for (const auto& [k, v] : overrides) doc.set(detail::trim(k), detail::trim(v));

    RunConfig cfg;

    auto kind_str = doc.take("experiment");
    if (!kind_str) throw ConfigError("missing field: experiment");
    auto kind = kind_from_name(*kind_str);
    if (!kind)
        throw ConfigError(
            "field experiment: unknown kind '" + *kind_str +
            "' (expected lyapunov-scan, m-function, measure, coupling-sweep, "
            "approximation, sc-weight or harmonic-check)");
    cfg.kind = *kind;

    if (auto v = doc.take("seed")) cfg.seed = detail::req_u64(*v, "seed");
    if (auto v = doc.take("threads")) {
        long long t = detail::req_ll(*v, "threads");
        detail::check(t >= 0 && t <= 4096, "threads", "must be in [0, 4096]");
        cfg.threads = unsigned(t);
    }
    if (auto v = doc.take("out_dir")) {
        detail::check(!v->empty(), "out_dir", "must not be empty");
        cfg.out_dir = *v;
    }

    if (auto v = doc.take("transform.alpha")) {
        cfg.alphas = detail::req_double_list(*v, "transform.alpha");
        detail::check(!cfg.alphas.empty() && cfg.alphas.size() <= 3,
                      "transform.alpha", "needs 1 to 3 rotation numbers");
    }

    cfg.function = parse_function_spec(doc, "function.");
    if (!cfg.function && cfg.kind != ExperimentKind::ScWeight)
        throw ConfigError(std::string("missing field: function.variant "
                                      "(required for ") +
                          kind_name(cfg.kind) + ")");

    auto lo = doc.take("grid.lo");
    auto hi = doc.take("grid.hi");
    if (lo.has_value() != hi.has_value())
        throw ConfigError("fields grid.lo/grid.hi: set both or neither");
    if (lo) {
        cfg.grid_lo = detail::req_double(*lo, "grid.lo");
        cfg.grid_hi = detail::req_double(*hi, "grid.hi");
        detail::check(*cfg.grid_lo < *cfg.grid_hi, "grid.lo",
                      "must be below grid.hi");
    }
    if (auto v = doc.take("grid.count")) {
        long long c = detail::req_ll(*v, "grid.count");
        detail::check(c >= 1 && c <= 10000000, "grid.count",
                      "must be in [1, 1e7]");
        cfg.grid_count = int(c);
    }

    if (auto v = doc.take("lyap.N")) {
        cfg.N = detail::req_ll(*v, "lyap.N");
        detail::check(cfg.N >= 1000, "lyap.N", "must be >= 1000");
    }
    if (auto v = doc.take("lyap.orbits")) {
        long long o = detail::req_ll(*v, "lyap.orbits");
        detail::check(o >= 1 && o <= 10000, "lyap.orbits",
                      "must be in [1, 10000]");
        cfg.orbits = int(o);
    }
    if (auto v = doc.take("delta_gamma")) {
        cfg.delta_gamma = detail::req_double(*v, "delta_gamma");
        detail::check(cfg.delta_gamma >= 0.0, "delta_gamma",
                      "must be >= 0 (0 = automatic)");
    }
    if (auto v = doc.take("scan.im")) {
        cfg.scan_im = detail::req_double(*v, "scan.im");
        detail::check(cfg.scan_im >= 0.0, "scan.im", "must be >= 0");
    }

    if (auto v = doc.take("energy.re"))
        cfg.energy_re = detail::req_double(*v, "energy.re");
    if (auto v = doc.take("energy.im"))
        cfg.energy_im = detail::req_double(*v, "energy.im");
    if (auto v = doc.take("mfun.max_iter")) {
        cfg.mfun_max_iter = detail::req_ll(*v, "mfun.max_iter");
        detail::check(cfg.mfun_max_iter >= 1, "mfun.max_iter", "must be >= 1");
    }
    if (auto v = doc.take("mfun.tol")) {
        cfg.mfun_tol = detail::req_double(*v, "mfun.tol");
        detail::check(cfg.mfun_tol > 0.0, "mfun.tol", "must be > 0");
    }
    if (auto v = doc.take("mfun.samples")) {
        long long s = detail::req_ll(*v, "mfun.samples");
        detail::check(s >= 1 && s <= 10000000, "mfun.samples",
                      "must be in [1, 1e7]");
        cfg.samples = int(s);
    }

    if (auto v = doc.take("coupling.Lambda")) {
        cfg.coupling_Lambda = detail::req_double(*v, "coupling.Lambda");
        detail::check(cfg.coupling_Lambda > 0.0, "coupling.Lambda",
                      "must be > 0");
    }
    if (auto v = doc.take("coupling.lambda_count")) {
        long long c = detail::req_ll(*v, "coupling.lambda_count");
        detail::check(c >= 2 && c <= 100000, "coupling.lambda_count",
                      "must be in [2, 1e5]");
        cfg.coupling_lambda_count = int(c);
    }

    if (auto v = doc.take("approx.k")) {
        long long k = detail::req_ll(*v, "approx.k");
        detail::check(k >= 2 && k <= 1000000, "approx.k", "must be in [2, 1e6]");
        cfg.approx_k = int(k);
    }
    if (auto v = doc.take("approx.schedule")) {
        cfg.approx_schedule = detail::req_ll_list(*v, "approx.schedule");
        detail::check(!cfg.approx_schedule.empty(), "approx.schedule",
                      "must not be empty");
        for (std::size_t i = 0; i < cfg.approx_schedule.size(); ++i) {
            detail::check(cfg.approx_schedule[i] >= 1, "approx.schedule",
                          "entries must be positive");
            if (i > 0)
                detail::check(
                    cfg.approx_schedule[i] > cfg.approx_schedule[i - 1],
                    "approx.schedule", "must be strictly increasing");
        }
    }
    if (auto v = doc.take("approx.n0")) {
        cfg.approx_n0 = detail::req_ll(*v, "approx.n0");
        detail::check(cfg.approx_n0 >= 0, "approx.n0",
                      "must be >= 0 (0 = minimal legal)");
    }
    if (auto v = doc.take("approx.horizon")) {
        cfg.approx_horizon = detail::req_ll(*v, "approx.horizon");
        detail::check(cfg.approx_horizon >= 2, "approx.horizon",
                      "must be >= 2");
    }
    if (auto v = doc.take("approx.l1_resolution")) {
        long long r = detail::req_ll(*v, "approx.l1_resolution");
        detail::check(r >= 100 && r <= 100000000, "approx.l1_resolution",
                      "must be in [100, 1e8]");
        cfg.l1_resolution = int(r);
    }

    if (auto v = doc.take("harmonic.center_re"))
        cfg.harmonic_center_re = detail::req_double(*v, "harmonic.center_re");
    if (auto v = doc.take("harmonic.center_im"))
        cfg.harmonic_center_im = detail::req_double(*v, "harmonic.center_im");
    if (auto v = doc.take("harmonic.radius")) {
        cfg.harmonic_radius = detail::req_double(*v, "harmonic.radius");
        detail::check(cfg.harmonic_radius > 0.0, "harmonic.radius",
                      "must be > 0");
    }
    if (auto v = doc.take("harmonic.K")) {
        long long k = detail::req_ll(*v, "harmonic.K");
        detail::check(k >= 4 && k <= 1000000, "harmonic.K",
                      "must be in [4, 1e6]");
        cfg.harmonic_K = int(k);
    }

    if (auto v = doc.take("sc.count")) {
        long long c = detail::req_ll(*v, "sc.count");
        detail::check(c >= 2 && c <= 10000000, "sc.count", "must be in [2, 1e7]");
        cfg.sc_count = int(c);
    }
    if (auto v = doc.take("sc.C")) cfg.sc_C = detail::req_double(*v, "sc.C");

    // per-kind extra validation with named constraints
    if (cfg.kind == ExperimentKind::LyapunovScan)
        detail::check(cfg.grid_count >= 2, "grid.count",
                      "must be >= 2 for lyapunov-scan");
    if (cfg.kind == ExperimentKind::MFunction)
        detail::check(cfg.energy_im >= 1e-6, "energy.im",
                      "must be >= 1e-6 for m-function");
    if (cfg.kind == ExperimentKind::HarmonicCheck)
        detail::check(cfg.harmonic_center_im - cfg.harmonic_radius >= 1e-3,
                      "harmonic.radius",
                      "disk must stay in Im >= 1e-3 (center_im - radius)");

    auto leftover = doc.unused();
    if (!leftover.empty()) {
        std::string msg = "unknown key";
        if (leftover.size() > 1) msg += "s";
        msg += ": ";
        for (std::size_t i = 0; i < leftover.size(); ++i) {
            if (i) msg += ", ";
            msg += leftover[i];
        }
        throw ConfigError(msg);
    }
    return cfg;
}

// Canonical full-form emission; parse(emit(cfg)) == cfg.
inline std::string emit_config(const RunConfig& cfg) {
    std::string out;
    out += std::string("experiment = ") + kind_name(cfg.kind) + "\n";
    out += "seed = " + std::to_string(cfg.seed) + "\n";
    out += "threads = " + std::to_string(cfg.threads) + "\n";
    out += "out_dir = " + cfg.out_dir + "\n";
    out += "transform.alpha = " + detail::join17(cfg.alphas) + "\n";
    if (cfg.function) emit_function_spec(out, *cfg.function, "function.");
    if (cfg.grid_lo) {
        out += "grid.lo = " + fmt17(*cfg.grid_lo) + "\n";
        out += "grid.hi = " + fmt17(*cfg.grid_hi) + "\n";
    }
    out += "grid.count = " + std::to_string(cfg.grid_count) + "\n";
    out += "lyap.N = " + std::to_string(cfg.N) + "\n";
    out += "lyap.orbits = " + std::to_string(cfg.orbits) + "\n";
    out += "delta_gamma = " + fmt17(cfg.delta_gamma) + "\n";
    out += "scan.im = " + fmt17(cfg.scan_im) + "\n";
    out += "energy.re = " + fmt17(cfg.energy_re) + "\n";
    out += "energy.im = " + fmt17(cfg.energy_im) + "\n";
    out += "mfun.max_iter = " + std::to_string(cfg.mfun_max_iter) + "\n";
    out += "mfun.tol = " + fmt17(cfg.mfun_tol) + "\n";
    out += "mfun.samples = " + std::to_string(cfg.samples) + "\n";
    out += "coupling.Lambda = " + fmt17(cfg.coupling_Lambda) + "\n";
    out += "coupling.lambda_count = " +
           std::to_string(cfg.coupling_lambda_count) + "\n";
    out += "approx.k = " + std::to_string(cfg.approx_k) + "\n";
    out += "approx.schedule = " + detail::join_ll(cfg.approx_schedule) + "\n";
    out += "approx.n0 = " + std::to_string(cfg.approx_n0) + "\n";
    out += "approx.horizon = " + std::to_string(cfg.approx_horizon) + "\n";
    out += "approx.l1_resolution = " + std::to_string(cfg.l1_resolution) + "\n";
    out += "harmonic.center_re = " + fmt17(cfg.harmonic_center_re) + "\n";
    out += "harmonic.center_im = " + fmt17(cfg.harmonic_center_im) + "\n";
    out += "harmonic.radius = " + fmt17(cfg.harmonic_radius) + "\n";
    out += "harmonic.K = " + std::to_string(cfg.harmonic_K) + "\n";
    out += "sc.count = " + std::to_string(cfg.sc_count) + "\n";
    out += "sc.C = " + fmt17(cfg.sc_C) + "\n";
    return out;
}

// single-line form for table comment headers
inline std::string emit_config_line(const RunConfig& cfg) {
    std::string multi = emit_config(cfg);
    std::string out;
    std::size_t pos = 0;
    while (pos < multi.size()) {
        std::size_t nl = multi.find('\n', pos);
        std::string line = multi.substr(pos, nl - pos);
        pos = (nl == std::string::npos) ? multi.size() : nl + 1;
        if (line.empty()) continue;
        // compact "k = v" to "k=v"
        std::size_t eq = line.find(" = ");
        if (eq != std::string::npos) line = line.substr(0, eq) + "=" + line.substr(eq + 3);
        if (!out.empty()) out += "; ";
        out += line;
    }
    return out;
}

} // namespace ergolab
