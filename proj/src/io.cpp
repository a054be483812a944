#include "bibo/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bibo {

namespace {

using nlohmann::json;

Complex parse_complex(const json& j, const char* what) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im")) {
        throw Error(ErrorCode::ParseError, std::string(what) + " must be {\"re\":..,\"im\":..}");
    }
    return {j.at("re").get<double>(), j.at("im").get<double>()};
}

std::vector<Complex> parse_complex_array(const json& j, const char* what) {
    if (!j.is_array()) throw Error(ErrorCode::ParseError, std::string(what) + " must be an array");
    std::vector<Complex> out;
    out.reserve(j.size());
    for (const auto& item : j) out.push_back(parse_complex(item, what));
    return out;
}

json complex_to_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

SpectralSystemSpec parse_spec_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
    }
    try {
        SpectralSystemSpec spec;
        spec.eigenvalues = parse_complex_array(j.at("eigenvalues"), "eigenvalues");
        spec.b_coeffs = parse_complex_array(j.at("b"), "b");
        spec.c_coeffs = parse_complex_array(j.at("c"), "c");
        if (j.contains("feedthrough")) spec.feedthrough = parse_complex(j.at("feedthrough"), "feedthrough");
        if (j.contains("tail")) {
            const json& tail = j.at("tail");
            const std::string kind = tail.at("kind").get<std::string>();
            if (kind == "none") {
                spec.tail_model = TailNone{};
            } else if (kind == "power-law") {
                TailPowerLaw pl;
                pl.a = tail.at("a").get<double>();
                pl.p = tail.at("p").get<double>();
                pl.b_mag = tail.value("b_mag", 1.0);
                pl.c_mag = tail.value("c_mag", 1.0);
                spec.tail_model = pl;
            } else if (kind == "user-bound") {
                spec.tail_model = TailUserBound{tail.at("value").get<double>()};
            } else {
                throw Error(ErrorCode::ParseError, "unknown tail kind: " + kind);
            }
        }
        return validate_spec(std::move(spec));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("spec schema violation: ") + e.what());
    }
}

SpectralSystemSpec load_spec_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec_json(buf.str());
}

std::string spec_to_json(const SpectralSystemSpec& spec) {
    json j;
    j["eigenvalues"] = json::array();
    j["b"] = json::array();
    j["c"] = json::array();
    for (std::size_t n = 0; n < spec.size(); ++n) {
        j["eigenvalues"].push_back(complex_to_json(spec.eigenvalues[n]));
        j["b"].push_back(complex_to_json(spec.b_coeffs[n]));
        j["c"].push_back(complex_to_json(spec.c_coeffs[n]));
    }
    j["feedthrough"] = complex_to_json(spec.feedthrough);
    if (std::holds_alternative<TailNone>(spec.tail_model)) {
        j["tail"] = json{{"kind", "none"}};
    } else if (const auto* pl = std::get_if<TailPowerLaw>(&spec.tail_model)) {
        j["tail"] = json{{"kind", "power-law"}, {"a", pl->a}, {"p", pl->p},
                         {"b_mag", pl->b_mag}, {"c_mag", pl->c_mag}};
    } else {
        j["tail"] = json{{"kind", "user-bound"}, {"value", std::get<TailUserBound>(spec.tail_model).value}};
    }
    return j.dump(2);
}

Signal parse_signal_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty signal CSV");
    if (line != "t,re,im" && line != "t,re,im\r") {
        throw Error(ErrorCode::ParseError, "signal CSV must start with header t,re,im");
    }
    std::vector<double> times;
    Signal sig;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::istringstream row(line);
        std::string cell;
        double vals[3];
        for (int i = 0; i < 3; ++i) {
            if (!std::getline(row, cell, ',')) {
                throw Error(ErrorCode::ParseError, "signal CSV row needs t,re,im");
            }
            try {
                vals[i] = std::stod(cell);
            } catch (const std::exception&) {
                throw Error(ErrorCode::ParseError, "bad number in signal CSV: " + cell);
            }
        }
        times.push_back(vals[0]);
        sig.samples.emplace_back(vals[1], vals[2]);
    }
    if (times.size() < 2) {
        sig.dt = 1.0;
        if (!times.empty() && times[0] != 0.0) {
            throw Error(ErrorCode::ParseError, "signal grid must start at t = 0");
        }
        return validate_signal(std::move(sig));
    }
    if (times[0] != 0.0) throw Error(ErrorCode::ParseError, "signal grid must start at t = 0");
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) throw Error(ErrorCode::ParseError, "signal grid must be increasing");
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double expected = dt * static_cast<double>(k);
        if (std::abs(times[k] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
            throw Error(ErrorCode::ParseError, "signal grid must be uniform");
        }
    }
    sig.dt = dt;
    return validate_signal(std::move(sig));
}

Signal load_signal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open signal file: " + path);
    return parse_signal_csv(in);
}

void write_signal_csv(std::ostream& out, const Signal& sig) {
    out << "t,re,im\n";
    for (std::size_t k = 0; k < sig.size(); ++k) {
        out << format_double(sig.time_at(k)) << ',' << format_double(sig.samples[k].real()) << ','
            << format_double(sig.samples[k].imag()) << '\n';
    }
}

void save_signal_csv(const std::string& path, const Signal& sig) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::ParseError, "cannot open output file: " + path);
    write_signal_csv(out, sig);
}

}  // namespace bibo
