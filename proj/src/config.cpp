#include "elbowsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <clocale>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace elbowsim {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

// section -> key -> entry
using Document = std::map<std::string, std::map<std::string, Entry>>;

Document tokenize(const std::string& text) {
    Document doc;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            }
            doc.try_emplace(section);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        if (section.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        }
        auto [it, inserted] = doc[section].try_emplace(key, Entry{value, lineno, false});
        if (!inserted) {
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key +
                              "' in [" + section + "]");
        }
    }
    return doc;
}

double parse_double(const Entry& e, const std::string& where) {
    const std::string& s = e.value;
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("line " + std::to_string(e.line) + ": " + where +
                          ": expected a number, got '" + s + "'");
    }
    return out;
}

bool parse_bool(const Entry& e, const std::string& where) {
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    throw ConfigError("line " + std::to_string(e.line) + ": " + where +
                      ": expected true/false, got '" + e.value + "'");
}

Vec2 parse_vec2(const Entry& e, const std::string& where) {
    const auto comma = e.value.find(',');
    if (comma == std::string::npos) {
        throw ConfigError("line " + std::to_string(e.line) + ": " + where +
                          ": expected two comma-separated numbers");
    }
    Entry first{trim(e.value.substr(0, comma)), e.line, true};
    Entry second{trim(e.value.substr(comma + 1)), e.line, true};
    return {parse_double(first, where), parse_double(second, where)};
}

class SectionReader {
public:
    SectionReader(Document& doc, const std::string& section) : section_(section) {
        auto it = doc.find(section);
        entries_ = it == doc.end() ? nullptr : &it->second;
    }

    bool has(const std::string& key) const {
        return entries_ && entries_->count(key) > 0;
    }

    const Entry* get(const std::string& key) {
        if (!entries_) return nullptr;
        auto it = entries_->find(key);
        if (it == entries_->end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    double number(const std::string& key, double fallback) {
        const Entry* e = get(key);
        return e ? parse_double(*e, qualified(key)) : fallback;
    }

    bool boolean(const std::string& key, bool fallback) {
        const Entry* e = get(key);
        return e ? parse_bool(*e, qualified(key)) : fallback;
    }

    Vec2 vec2(const std::string& key, const Vec2& fallback) {
        const Entry* e = get(key);
        return e ? parse_vec2(*e, qualified(key)) : fallback;
    }

    std::string text(const std::string& key, const std::string& fallback) {
        const Entry* e = get(key);
        return e ? e->value : fallback;
    }

    std::string qualified(const std::string& key) const { return section_ + "." + key; }

private:
    std::string section_;
    std::map<std::string, Entry>* entries_;
};

void reject_unknown(const Document& doc) {
    static const std::map<std::string, bool> known_sections = {
        {"manipulator", true}, {"controller", true}, {"disturbance", true},
        {"sim", true},         {"output", true}};
    for (const auto& [section, entries] : doc) {
        if (!known_sections.count(section)) {
            throw ConfigError("unknown section [" + section + "]");
        }
        for (const auto& [key, entry] : entries) {
            if (!entry.used) {
                throw ConfigError("line " + std::to_string(entry.line) + ": unknown key '" + key +
                                  "' in [" + section + "]");
            }
        }
    }
}

void require_positive(double v, const std::string& field) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError(field + ": must be strictly positive");
    }
}

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string format_vec2(const Vec2& v) {
    return format_double(v[0]) + ", " + format_double(v[1]);
}

}  // namespace

void RunManifest::validate() const {
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (output.name.empty()) throw ConfigError("output.name: must not be empty");
    if (output.name.find('/') != std::string::npos ||
        output.name.find('\\') != std::string::npos) {
        throw ConfigError("output.name: must not contain path separators");
    }
    struct GainCheck {
        void operator()(const InvDynGains& g) const {
            require_positive(g.kd, "controller.kd");
            require_positive(g.kp, "controller.kp");
            require_positive(g.ki, "controller.ki");
        }
        void operator()(const LyapGains& g) const {
            require_positive(g.kd, "controller.kd");
            require_positive(g.ki, "controller.ki");
            require_positive(g.lambda, "controller.lambda");
        }
        void operator()(const DiscGains& g) const {
            require_positive(g.kd_switch, "controller.kd_switch");
            require_positive(g.lambda, "controller.lambda");
            require_positive(g.epsilon, "controller.epsilon");
        }
    };
    std::visit(GainCheck{}, config.controller);
}

namespace {

RunManifest parse_config_impl(const std::string& text, const std::string& default_name) {
    Document doc = tokenize(text);
    RunManifest m;
    m.output.name = default_name;

    SectionReader manip(doc, "manipulator");
    m.config.params.m1 = manip.number("m1", m.config.params.m1);
    m.config.params.m2 = manip.number("m2", m.config.params.m2);
    m.config.params.I1 = manip.number("I1", m.config.params.I1);
    m.config.params.I2 = manip.number("I2", m.config.params.I2);
    m.config.params.l1 = manip.number("l1", m.config.params.l1);
    m.config.params.l2 = manip.number("l2", m.config.params.l2);
    m.config.params.lc1 = manip.number("lc1", m.config.params.lc1);
    m.config.params.lc2 = manip.number("lc2", m.config.params.lc2);
    m.config.params.g = manip.number("g", m.config.params.g);

    SectionReader ctrl(doc, "controller");
    const std::string type = ctrl.text("type", "");
    if (type.empty()) {
        throw ConfigError("controller.type: required (inverse_dynamics, lyapunov or discontinuous)");
    }
    if (type == "inverse_dynamics") {
        InvDynGains g;
        g.kd = ctrl.number("kd", g.kd);
        g.kp = ctrl.number("kp", g.kp);
        g.ki = ctrl.number("ki", g.ki);
        m.config.controller = g;
    } else if (type == "lyapunov") {
        LyapGains g;
        g.kd = ctrl.number("kd", g.kd);
        g.ki = ctrl.number("ki", g.ki);
        g.lambda = ctrl.number("lambda", g.lambda);
        m.config.controller = g;
    } else if (type == "discontinuous") {
        DiscGains g;
        g.kd_switch = ctrl.number("kd_switch", g.kd_switch);
        g.lambda = ctrl.number("lambda", g.lambda);
        g.epsilon = ctrl.number("epsilon", g.epsilon);
        m.config.controller = g;
    } else {
        throw ConfigError("controller.type: unknown controller '" + type + "'");
    }

    SectionReader dist(doc, "disturbance");
    m.config.disturbance.d = dist.vec2("d", m.config.disturbance.d);
    m.config.disturbance.limit = dist.number("limit", m.config.disturbance.limit);

    SectionReader sim(doc, "sim");
    m.config.t_end = sim.number("t_end", m.config.t_end);
    m.config.dt = sim.number("dt", m.config.dt);
    m.config.initial_state.q = sim.vec2("q", m.config.initial_state.q);
    m.config.initial_state.qdot = sim.vec2("qdot", m.config.initial_state.qdot);

    SectionReader output(doc, "output");
    m.output.name = output.text("name", m.output.name);
    m.output.dir = output.text("dir", m.output.dir.string());
    m.output.states = output.boolean("states", m.output.states);
    m.output.controls = output.boolean("controls", m.output.controls);
    m.output.diagnostics = output.boolean("diagnostics", m.output.diagnostics);

    reject_unknown(doc);
    m.validate();
    return m;
}

}  // namespace

RunManifest parse_config(const std::string& text) {
    return parse_config_impl(text, "run");
}

RunManifest parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_impl(buf.str(), path.stem().string());
}

std::string render_config(const RunManifest& m) {
    std::ostringstream out;
    const ManipulatorParams& p = m.config.params;
    out << "[manipulator]\n";
    out << "m1 = " << format_double(p.m1) << "\n";
    out << "m2 = " << format_double(p.m2) << "\n";
    out << "I1 = " << format_double(p.I1) << "\n";
    out << "I2 = " << format_double(p.I2) << "\n";
    out << "l1 = " << format_double(p.l1) << "\n";
    out << "l2 = " << format_double(p.l2) << "\n";
    out << "lc1 = " << format_double(p.lc1) << "\n";
    out << "lc2 = " << format_double(p.lc2) << "\n";
    out << "g = " << format_double(p.g) << "\n";

    out << "\n[controller]\n";
    struct Renderer {
        std::ostringstream& out;
        void operator()(const InvDynGains& g) const {
            out << "type = inverse_dynamics\n";
            out << "kd = " << format_double(g.kd) << "\n";
            out << "kp = " << format_double(g.kp) << "\n";
            out << "ki = " << format_double(g.ki) << "\n";
        }
        void operator()(const LyapGains& g) const {
            out << "type = lyapunov\n";
            out << "kd = " << format_double(g.kd) << "\n";
            out << "ki = " << format_double(g.ki) << "\n";
            out << "lambda = " << format_double(g.lambda) << "\n";
        }
        void operator()(const DiscGains& g) const {
            out << "type = discontinuous\n";
            out << "kd_switch = " << format_double(g.kd_switch) << "\n";
            out << "lambda = " << format_double(g.lambda) << "\n";
            out << "epsilon = " << format_double(g.epsilon) << "\n";
        }
    };
    std::visit(Renderer{out}, m.config.controller);

    out << "\n[disturbance]\n";
    out << "d = " << format_vec2(m.config.disturbance.d) << "\n";
    out << "limit = " << format_double(m.config.disturbance.limit) << "\n";

    out << "\n[sim]\n";
    out << "t_end = " << format_double(m.config.t_end) << "\n";
    out << "dt = " << format_double(m.config.dt) << "\n";
    out << "q = " << format_vec2(m.config.initial_state.q) << "\n";
    out << "qdot = " << format_vec2(m.config.initial_state.qdot) << "\n";

    out << "\n[output]\n";
    out << "name = " << m.output.name << "\n";
    out << "dir = " << m.output.dir.string() << "\n";
    out << "states = " << (m.output.states ? "true" : "false") << "\n";
    out << "controls = " << (m.output.controls ? "true" : "false") << "\n";
    out << "diagnostics = " << (m.output.diagnostics ? "true" : "false") << "\n";
    return out.str();
}

}  // namespace elbowsim
