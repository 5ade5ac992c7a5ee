#include "slsamp/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace slsamp {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

struct Parsed {
    // section -> key -> entry
    std::map<std::string, std::map<std::string, Entry>> sections;
    std::string path;

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw ConfigError(path + ":" + std::to_string(line) + ": " + msg);
    }
};

Parsed tokenize(const std::string& text, const std::string& path) {
    Parsed out;
    out.path = path;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') out.fail(lineno, "unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) out.fail(lineno, "empty section name");
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) out.fail(lineno, "expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) out.fail(lineno, "empty key");
        if (section.empty()) out.fail(lineno, "key '" + key + "' outside any section");
        auto& sec = out.sections[section];
        if (sec.count(key)) out.fail(lineno, "duplicate key '" + key + "'");
        sec[key] = Entry{value, lineno, false};
    }
    return out;
}

double parse_number(Parsed& cfg, const Entry& e, const std::string& key) {
    const char* s = e.value.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
        cfg.fail(e.line, "expected a number for key '" + key + "', got '" + e.value + "'");
    return v;
}

std::vector<double> parse_list(Parsed& cfg, const Entry& e, const std::string& key) {
    std::string v = trim(e.value);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        cfg.fail(e.line, "expected a bracketed list for key '" + key + "'");
    std::string body = trim(v.substr(1, v.size() - 2));
    std::vector<double> out;
    if (body.empty()) return out;
    std::istringstream in(body);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        const char* s = item.c_str();
        char* end = nullptr;
        double x = std::strtod(s, &end);
        if (end == s || *end != '\0')
            cfg.fail(e.line, "bad list element '" + item + "' for key '" + key + "'");
        out.push_back(x);
    }
    return out;
}

std::string dir_of(const std::string& path) {
    std::size_t cut = path.find_last_of('/');
    if (cut == std::string::npos) return ".";
    if (cut == 0) return "/";
    return path.substr(0, cut);
}

// a table file is plain text: one "x y" or "x,y" pair per line, '#' comments
void load_table(const std::string& path, std::vector<double>& xs, std::vector<double>& ys) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open table file");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::replace(t.begin(), t.end(), ',', ' ');
        std::istringstream row(t);
        double x, y;
        if (!(row >> x >> y))
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected two numbers");
        std::string rest;
        if (row >> rest)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": trailing content '" +
                              rest + "'");
        xs.push_back(x);
        ys.push_back(y);
    }
    if (xs.empty()) throw ConfigError(path + ": table file is empty");
}

// "poly:[...]" or "table:path" -> one segment spec; tables are loaded here,
// slope fitting happens in finalize
SegmentSpec parse_fn_spec(Parsed& cfg, const Entry& e, const std::string& key,
                          const std::string& base_dir) {
    const std::string& v = e.value;
    if (v.rfind("poly:", 0) == 0) {
        Entry sub{trim(v.substr(5)), e.line, false};
        return PolySegment{parse_list(cfg, sub, key)};
    }
    if (v.rfind("table:", 0) == 0) {
        std::string rel = trim(v.substr(6));
        if (rel.empty()) cfg.fail(e.line, "empty table path for key '" + key + "'");
        std::string full = rel.front() == '/' ? rel : base_dir + "/" + rel;
        TableSegment seg;
        load_table(full, seg.x, seg.y);
        return seg;
    }
    cfg.fail(e.line, "value for key '" + key + "' must start with 'poly:' or 'table:'");
}

class SectionReader {
public:
    SectionReader(Parsed& cfg, const std::string& name) : cfg_(cfg), name_(name) {
        auto it = cfg.sections.find(name);
        sec_ = it == cfg.sections.end() ? nullptr : &it->second;
    }

    bool present() const { return sec_ != nullptr; }

    Entry* find(const std::string& key) {
        if (!sec_) return nullptr;
        auto it = sec_->find(key);
        if (it == sec_->end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    double require_number(const std::string& key) {
        Entry* e = find(key);
        if (!e)
            throw ConfigError(cfg_.path + ": missing key '" + key + "' in section [" + name_ +
                              "]");
        return parse_number(cfg_, *e, key);
    }

    void reject_unused() {
        if (!sec_) return;
        for (const auto& [key, entry] : *sec_)
            if (!entry.used)
                cfg_.fail(entry.line, "unknown key '" + key + "' in section [" + name_ + "]");
    }

private:
    Parsed& cfg_;
    std::string name_;
    std::map<std::string, Entry>* sec_;
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& path) {
    Parsed cfg = tokenize(text, path);
    const std::string base_dir = dir_of(path);

    static const char* known[] = {"interval", "potential", "boundary", "transmission",
                                  "solver",   "sampling"};
    for (const auto& [name, sec] : cfg.sections) {
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return name == k; }) == std::end(known)) {
            int line = sec.empty() ? 0 : sec.begin()->second.line;
            cfg.fail(line, "unknown section [" + name + "]");
        }
    }

    RawProblem raw;
    SectionReader interval(cfg, "interval");
    if (!interval.present()) throw ConfigError(path + ": missing section [interval]");
    raw.a = interval.require_number("a");
    raw.c1 = interval.require_number("c1");
    raw.c2 = interval.require_number("c2");
    raw.b = interval.require_number("b");
    interval.reject_unused();

    SectionReader boundary(cfg, "boundary");
    if (!boundary.present()) throw ConfigError(path + ": missing section [boundary]");
    raw.beta1 = boundary.require_number("beta1");
    raw.beta2 = boundary.require_number("beta2");
    raw.alpha1 = boundary.require_number("alpha1");
    raw.alpha2 = boundary.require_number("alpha2");
    raw.alpha1p = boundary.require_number("alpha1p");
    raw.alpha2p = boundary.require_number("alpha2p");
    boundary.reject_unused();

    SectionReader transmission(cfg, "transmission");
    if (!transmission.present()) throw ConfigError(path + ": missing section [transmission]");
    raw.delta = transmission.require_number("delta");
    raw.gamma = transmission.require_number("gamma");
    transmission.reject_unused();

    SectionReader potential(cfg, "potential");
    if (potential.present()) {
        std::array<SegmentSpec, 3> segs{PolySegment{}, PolySegment{}, PolySegment{}};
        const char* keys[3] = {"seg1", "seg2", "seg3"};
        for (int s = 0; s < 3; ++s) {
            if (Entry* e = potential.find(keys[s]))
                segs[std::size_t(s)] = parse_fn_spec(cfg, *e, keys[s], base_dir);
        }
        potential.reject_unused();
        raw.q = PiecewiseFn::per_segment(std::move(segs));
    }

    SolverConfig solver;
    SectionReader sol(cfg, "solver");
    if (sol.present()) {
        if (Entry* e = sol.find("tol_ode")) {
            solver.tol_ode = parse_number(cfg, *e, "tol_ode");
            if (!(solver.tol_ode > 0)) cfg.fail(e->line, "tol_ode must be positive");
        }
        if (Entry* e = sol.find("tol_root")) {
            solver.tol_root = parse_number(cfg, *e, "tol_root");
            if (!(solver.tol_root > 0)) cfg.fail(e->line, "tol_root must be positive");
        }
        if (Entry* e = sol.find("n_eigs")) {
            double v = parse_number(cfg, *e, "n_eigs");
            if (v < 1 || v != std::floor(v)) cfg.fail(e->line, "n_eigs must be a positive integer");
            solver.n_eigs = int(v);
        }
        if (Entry* e = sol.find("lambda_min"))
            solver.lambda_min = parse_number(cfg, *e, "lambda_min");
        if (Entry* e = sol.find("lambda_max"))
            solver.lambda_max = parse_number(cfg, *e, "lambda_max");
        if (!std::isnan(solver.lambda_min) && !std::isnan(solver.lambda_max) &&
            !(solver.lambda_min < solver.lambda_max))
            throw ConfigError(path + ": lambda_min must be below lambda_max");
        sol.reject_unused();
    }

    SamplingConfig sampling;
    SectionReader samp(cfg, "sampling");
    if (samp.present()) {
        if (Entry* e = samp.find("g")) {
            SegmentSpec spec = parse_fn_spec(cfg, *e, "g", base_dir);
            if (std::holds_alternative<TableSegment>(spec)) {
                auto& t = std::get<TableSegment>(spec);
                sampling.g = PiecewiseFn::table(std::move(t.x), std::move(t.y));
            } else {
                sampling.g = PiecewiseFn::polynomial(std::get<PolySegment>(spec).coeff);
            }
            sampling.g_given = true;
        }
        if (Entry* e = samp.find("probes")) sampling.probes = parse_list(cfg, *e, "probes");
        if (Entry* e = samp.find("n_schedule")) {
            for (double v : parse_list(cfg, *e, "n_schedule")) {
                if (v < 1 || v != std::floor(v))
                    cfg.fail(e->line, "n_schedule entries must be positive integers");
                sampling.n_schedule.push_back(int(v));
            }
        }
        samp.reject_unused();
    }

    Problem problem = Problem::validate(std::move(raw));
    if (sampling.g_given)
        sampling.g.finalize(problem.a(), problem.c1(), problem.c2(), problem.b(), "source g");

    RunConfig rc{std::move(problem), solver, std::move(sampling), fnv1a64(text),  path};
    return rc;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

}  // namespace slsamp
