#include "langford/system_io.hpp"

#include <charconv>
#include <fstream>
#include <nlohmann/json.hpp>

#include "langford/errors.hpp"

namespace langford {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& context) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) { ok = true; break; }
        if (!ok) throw ParseError(context + ": unknown key '" + key + "'");
    }
}

const json& require_key(const json& j, const char* key, const std::string& context) {
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(context + ": missing key '" + key + "'");
    return *it;
}

Rational rational_from(const json& v, const std::string& context) {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
    throw ParseError(context + ": expected a rational as a string like \"-1/3\"");
}

double number_from(const json& v, const std::string& context) {
    if (!v.is_number()) throw ParseError(context + ": expected a number");
    return v.get<double>();
}

}  // namespace

Params params_from_json(const json& j, const std::string& context) {
    if (!j.is_object()) throw ParseError(context + ": params must be an object");
    reject_unknown_keys(j, {"a", "b", "c", "d", "e"}, context);
    Params p;
    p.a = rational_from(require_key(j, "a", context), context + ".a");
    p.b = rational_from(require_key(j, "b", context), context + ".b");
    p.c = rational_from(require_key(j, "c", context), context + ".c");
    p.d = rational_from(require_key(j, "d", context), context + ".d");
    p.e = rational_from(require_key(j, "e", context), context + ".e");
    return p;
}

json params_to_json(const Params& p) {
    return json{{"a", p.a.str()}, {"b", p.b.str()}, {"c", p.c.str()},
                {"d", p.d.str()}, {"e", p.e.str()}};
}

Signal signal_from_json(const json& j, const std::string& context) {
    if (!j.is_array()) throw ParseError(context + ": signal must be an array of term records");
    Signal s;
    int n = 0;
    for (const auto& term : j) {
        const std::string tctx = context + "[" + std::to_string(n++) + "]";
        if (!term.is_object()) throw ParseError(tctx + ": term must be an object");
        reject_unknown_keys(term, {"amp", "freq", "type"}, tctx);
        const std::string type = term.contains("type") ? term["type"].get<std::string>() : "sin";
        const double amp = number_from(require_key(term, "amp", tctx), tctx + ".amp");
        if (type == "const") {
            if (term.contains("freq")) throw ParseError(tctx + ": constant term has no 'freq'");
            s.add_constant(amp);
            continue;
        }
        const double freq = number_from(require_key(term, "freq", tctx), tctx + ".freq");
        if (freq == 0.0) throw ParseError(tctx + ": trig term requires freq != 0");
        if (type == "sin")
            s.add_sine(amp, freq);
        else if (type == "cos")
            s.add_cosine(amp, freq);
        else
            throw ParseError(tctx + ": unknown term type '" + type + "'");
    }
    return s;
}

json signal_to_json(const Signal& s) {
    json terms = json::array();
    for (const auto& t : s.sine_terms()) terms.push_back({{"amp", t.amp}, {"freq", t.freq}});
    for (const auto& t : s.cosine_terms())
        terms.push_back({{"amp", t.amp}, {"freq", t.freq}, {"type", "cos"}});
    if (s.constant_term() != 0.0)
        terms.push_back({{"amp", s.constant_term()}, {"type", "const"}});
    return terms;
}

PerturbedSystem system_from_json(const json& j, const std::string& context) {
    if (!j.is_object()) throw ParseError(context + ": system description must be an object");
    reject_unknown_keys(j, {"family", "params", "signals"}, context);
    const std::string fam_name =
        require_key(j, "family", context).get<std::string>();
    const Family fam = family_from_name(fam_name);
    const Params p = params_from_json(require_key(j, "params", context), context + ".params");

    std::vector<Signal> signals;
    if (j.contains("signals")) {
        const json& sig = j["signals"];
        if (!sig.is_array()) throw ParseError(context + ".signals: expected an array of signals");
        int n = 0;
        for (const auto& s : sig)
            signals.push_back(signal_from_json(s, context + ".signals[" + std::to_string(n++) + "]"));
    }

    const size_t expected = fam == Family::base ? 0 : fam == Family::eq5 ? 3 : fam == Family::eq6 ? 4 : 5;
    if (signals.size() != expected)
        throw ParseError(context + ": family '" + fam_name + "' takes " +
                         std::to_string(expected) + " signals, got " +
                         std::to_string(signals.size()));

    switch (fam) {
        case Family::base:
            return PerturbedSystem::base_system(p);
        case Family::eq5:
            return PerturbedSystem::eq5(p, signals[0], signals[1], signals[2]);
        case Family::eq6:
            return PerturbedSystem::eq6(p, signals[0], signals[1], signals[2], signals[3]);
        case Family::eq7:
            return PerturbedSystem::eq7(p, signals[0], signals[1], signals[2], signals[3],
                                        signals[4]);
    }
    throw ParseError(context + ": unreachable family");
}

json system_to_json(const PerturbedSystem& sys) {
    json j;
    j["family"] = family_name(sys.family());
    j["params"] = params_to_json(sys.params());
    json sigs = json::array();
    for (const auto& t : sys.perturbations()) sigs.push_back(signal_to_json(t.signal));
    if (!sigs.empty()) j["signals"] = sigs;
    return j;
}

json read_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open '" + file.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(file.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& file, const json& j) {
    std::ofstream out(file);
    if (!out) throw ParseError("cannot write '" + file.string() + "'");
    out << j.dump(2) << "\n";
}

PerturbedSystem load_system(const std::filesystem::path& file) {
    return system_from_json(read_json_file(file), file.string());
}

Params load_params(const std::filesystem::path& file) {
    const json j = read_json_file(file);
    if (j.is_object() && j.contains("params")) {
        reject_unknown_keys(j, {"params"}, file.string());
        return params_from_json(j["params"], file.string() + ".params");
    }
    return params_from_json(j, file.string());
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& tr) {
    std::ofstream out(file);
    if (!out) throw ParseError("cannot write '" + file.string() + "'");
    out << "t,x,y,z\n";
    for (const auto& s : tr.samples)
        out << format_double(s.t) << "," << format_double(s.state.x) << ","
            << format_double(s.state.y) << "," << format_double(s.state.z) << "\n";
}

}  // namespace langford
