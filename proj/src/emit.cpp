#include "uqbench/emit.hpp"

#include "uqbench/errors.hpp"
#include "uqbench/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

namespace uqbench {

using nlohmann::json;

namespace {

void dump_value(const json& j, std::string& out, int depth)
{
    const std::string pad(static_cast<std::size_t>(2 * depth + 2), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad + json(it.key()).dump() + ": ";
            dump_value(it.value(), out, depth + 1);
        }
        out += "\n" + close_pad + "}";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        const bool flat = std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
        if (flat) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ", ";
                dump_value(j[i], out, depth + 1);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ",\n";
            out += pad;
            dump_value(j[i], out, depth + 1);
        }
        out += "\n" + close_pad + "]";
        return;
    }
    case json::value_t::number_float: {
        const double v = j.get<double>();
        out += std::isfinite(v) ? format_sig12(v) : "null";
        return;
    }
    default:
        out += j.dump();
        return;
    }
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::string num(double v) { return format_sig12(v); }

std::string fixed2(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// Plot frame mapping data ranges onto a fixed canvas.
struct Frame {
    double x0, x1, y0, y1;
    static constexpr double W = 520, H = 420, L = 70, R = 20, T = 40, B = 60;
    double px(double x) const { return L + (x - x0) / (x1 - x0) * (W - L - R); }
    double py(double y) const { return H - B - (y - y0) / (y1 - y0) * (H - T - B); }
};

std::string svg_open(const std::string& title)
{
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed2(Frame::W) + "\" height=\"" +
           fixed2(Frame::H) + "\" viewBox=\"0 0 " + fixed2(Frame::W) + " " + fixed2(Frame::H) + "\">\n" +
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + "<text x=\"" + fixed2(Frame::W / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" + xml_escape(title) +
           "</text>\n";
}

std::string svg_axes(const Frame& f, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<std::pair<double, std::string>>& xticks,
                     const std::vector<std::pair<double, std::string>>& yticks)
{
    std::string s;
    s += "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
    s += "<line x1=\"" + fixed2(f.px(f.x0)) + "\" y1=\"" + fixed2(f.py(f.y0)) + "\" x2=\"" + fixed2(f.px(f.x1)) +
         "\" y2=\"" + fixed2(f.py(f.y0)) + "\"/>\n";
    s += "<line x1=\"" + fixed2(f.px(f.x0)) + "\" y1=\"" + fixed2(f.py(f.y0)) + "\" x2=\"" + fixed2(f.px(f.x0)) +
         "\" y2=\"" + fixed2(f.py(f.y1)) + "\"/>\n";
    s += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (const auto& [v, text] : xticks)
        s += "<text x=\"" + fixed2(f.px(v)) + "\" y=\"" + fixed2(f.py(f.y0) + 16) + "\" text-anchor=\"middle\">" +
             xml_escape(text) + "</text>\n";
    for (const auto& [v, text] : yticks)
        s += "<text x=\"" + fixed2(f.px(f.x0) - 6) + "\" y=\"" + fixed2(f.py(v) + 4) + "\" text-anchor=\"end\">" +
             xml_escape(text) + "</text>\n";
    s += "<text x=\"" + fixed2((Frame::L + Frame::W - Frame::R) / 2) + "\" y=\"" + fixed2(Frame::H - 18) +
         "\" text-anchor=\"middle\">" + xml_escape(xlabel) + "</text>\n";
    s += "<text x=\"18\" y=\"" + fixed2((Frame::T + Frame::H - Frame::B) / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " + fixed2((Frame::T + Frame::H - Frame::B) / 2) +
         ")\">" + xml_escape(ylabel) + "</text>\n</g>\n";
    return s;
}

std::vector<std::pair<double, std::string>> decade_ticks(double lo, double hi)
{
    std::vector<std::pair<double, std::string>> t;
    for (double e = std::ceil(lo); e <= std::floor(hi); e += 1.0) t.emplace_back(e, "1e" + num(e));
    return t;
}

void require(bool ok, const std::string& what)
{
    if (!ok) throw ValidationError("artifact schema: " + what);
}

void require_keys(const json& j, std::initializer_list<const char*> keys)
{
    for (const char* k : keys) require(j.contains(k), std::string("missing key '") + k + "'");
}

bool is_numeric_array(const json& j)
{
    return j.is_array() && std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_number() || e.is_null(); });
}

} // namespace

std::string_view to_string(Format f)
{
    switch (f) {
    case Format::json: return "json";
    case Format::csv: return "csv";
    case Format::svg: return "svg";
    }
    return "?";
}

Format parse_format(std::string_view name)
{
    for (auto f : {Format::json, Format::csv, Format::svg})
        if (name == to_string(f)) return f;
    throw ValidationError("unknown format '" + std::string(name) + "' (expected json, csv or svg)");
}

std::string dump_json(const json& j)
{
    std::string out;
    dump_value(j, out, 0);
    out += "\n";
    return out;
}

json to_json(const Estimate& e, const std::vector<double>& levels)
{
    json j;
    j["kind"] = "estimate";
    j["method"] = e.method;
    j["mu_hat"] = e.mu_hat;
    j["scale"] = e.scale;
    j["interval_kind"] = std::string(to_string(e.interval_kind));
    if (e.interval_kind == IntervalKind::student_t) j["df"] = e.df;
    j["n_evals"] = e.n_evals;
    j["flops_linear"] = e.flops_linear;
    json iv = json::object();
    for (double l : levels) {
        const Interval i = e.interval(l);
        iv[format_sig12(l)] = json::array({i.lo, i.hi});
    }
    j["intervals"] = iv;
    j["diagnostics"] = json::object();
    for (const auto& [k, v] : e.diagnostics) j["diagnostics"][k] = v;
    return j;
}

json to_json(const CalibrationReport& r)
{
    json j;
    j["kind"] = "calibration_report";
    j["method"] = r.method;
    j["integrand"] = r.integrand;
    j["n"] = r.n;
    j["R"] = r.R;
    j["master_seed"] = r.master_seed;
    j["levels"] = r.levels;
    j["coverage"] = r.coverage;
    j["hits"] = r.hits;
    j["mean_width"] = r.mean_width;
    j["rmse"] = r.rmse;
    json band = json::array();
    for (const auto& b : r.band) band.push_back(json::array({b.lo, b.hi}));
    j["band"] = band;
    if (!r.diagnostics.empty()) j["diagnostics"] = r.diagnostics;
    return j;
}

json to_json(const ComparisonTable& t)
{
    json j;
    j["kind"] = "comparison";
    j["integrand"] = t.integrand;
    j["R"] = t.R;
    j["master_seed"] = t.master_seed;
    j["budget"] = {{"budget_evals", t.budget.budget_evals},
                   {"eta", t.budget.eta},
                   {"eta_preset", t.budget.eta_preset},
                   {"c_f", t.budget.c_f},
                   {"c_lin", t.budget.c_lin}};
    json rows = json::array();
    for (const auto& r : t.rows) {
        rows.push_back({{"label", r.label},
                        {"method", std::string(to_string(r.method))},
                        {"n", r.n},
                        {"m", r.m},
                        {"n_evals", r.n_evals},
                        {"flops_linear", r.flops_linear},
                        {"modeled_cost", r.modeled_cost},
                        {"rmse", r.rmse},
                        {"mean_width_99", r.mean_width_99},
                        {"coverage_99", r.coverage_99},
                        {"excluded", r.excluded},
                        {"diagnostic", r.diagnostic}});
    }
    j["rows"] = rows;
    return j;
}

json to_json(const std::vector<ScaleGrowthReport>& reports)
{
    json j;
    j["kind"] = "scale_growth";
    json arr = json::array();
    for (const auto& r : reports) {
        arr.push_back({{"p", r.p},
                       {"lengthscale", r.lengthscale},
                       {"nugget", r.nugget},
                       {"profiled", r.profiled},
                       {"ns", r.ns},
                       {"sigma_hat", r.sigma_hat},
                       {"lengthscales", r.lengthscales},
                       {"condition_number", r.condition_number},
                       {"jitter", r.jitter},
                       {"dropped", r.dropped},
                       {"fitted_slope", r.fitted_slope},
                       {"target_slope", r.target_slope},
                       {"strictly_increasing", r.strictly_increasing}});
    }
    j["reports"] = arr;
    return j;
}

void validate_artifact(const json& j)
{
    require(j.is_object(), "top level must be an object");
    require(j.contains("kind") && j["kind"].is_string(), "missing string key 'kind'");
    const std::string kind = j["kind"];
    if (kind == "estimate") {
        require_keys(j, {"method", "mu_hat", "scale", "interval_kind", "n_evals", "flops_linear", "intervals"});
        require(j["method"].is_string(), "method must be a string");
        require(j["mu_hat"].is_number(), "mu_hat must be a number");
        require(j["scale"].is_number() && j["scale"].get<double>() >= 0.0, "scale must be a number >= 0");
        require(j["n_evals"].is_number_integer(), "n_evals must be an integer");
        const std::string ik = j["interval_kind"];
        require(ik == "clt" || ik == "student_t" || ik == "bootstrap_t" || ik == "gaussian_posterior",
                "unknown interval_kind '" + ik + "'");
        if (ik == "student_t") require(j.contains("df") && j["df"].is_number(), "student_t needs df");
        for (auto it = j["intervals"].begin(); it != j["intervals"].end(); ++it) {
            require(is_numeric_array(it.value()) && it.value().size() == 2, "interval must be [lo, hi]");
            require(it.value()[0].get<double>() <= it.value()[1].get<double>(), "interval has lo > hi");
        }
    } else if (kind == "calibration_report") {
        require_keys(j, {"method", "integrand", "n", "R", "master_seed", "levels", "coverage", "band", "hits",
                         "mean_width", "rmse"});
        require(is_numeric_array(j["levels"]) && is_numeric_array(j["coverage"]), "levels/coverage must be numeric");
        const std::size_t L = j["levels"].size();
        require(j["coverage"].size() == L && j["band"].size() == L && j["hits"].size() == L &&
                    j["mean_width"].size() == L,
                "per-level arrays must have equal length");
        for (std::size_t i = 0; i < L; ++i) {
            const double l = j["levels"][i], c = j["coverage"][i];
            require(l > 0.0 && l < 1.0, "level outside (0, 1)");
            require(c >= 0.0 && c <= 1.0, "coverage outside [0, 1]");
            require(is_numeric_array(j["band"][i]) && j["band"][i].size() == 2, "band entries must be [lo, hi]");
        }
    } else if (kind == "comparison") {
        require_keys(j, {"integrand", "R", "master_seed", "budget", "rows"});
        require(j["rows"].is_array(), "rows must be an array");
        for (const auto& r : j["rows"]) {
            require_keys(r, {"label", "method", "n", "m", "n_evals", "flops_linear", "modeled_cost", "rmse",
                             "mean_width_99", "coverage_99", "excluded", "diagnostic"});
            require(r["excluded"].is_boolean(), "excluded must be a boolean");
        }
    } else if (kind == "scale_growth") {
        require_keys(j, {"reports"});
        for (const auto& r : j["reports"]) {
            require_keys(r, {"p", "ns", "sigma_hat", "fitted_slope", "target_slope", "condition_number",
                             "strictly_increasing"});
            require(r["ns"].size() == r["sigma_hat"].size() && r["ns"].size() == r["condition_number"].size(),
                    "ns, sigma_hat and condition_number must align");
        }
    } else if (kind == "discrepancy") {
        require_keys(j, {"generator", "randomization", "n", "d", "seed", "star_discrepancy"});
        require(j["star_discrepancy"].is_number(), "star_discrepancy must be a number");
    } else if (kind == "integrands") {
        require_keys(j, {"integrands"});
        for (const auto& e : j["integrands"]) require_keys(e, {"name", "d", "exact_mean", "tags"});
    } else {
        require(false, "unknown kind '" + kind + "'");
    }
}

std::string coverage_svg(const CalibrationReport& r)
{
    const Frame f{0.0, 1.0, 0.0, 1.0};
    std::vector<std::pair<double, std::string>> ticks;
    for (double v = 0.0; v <= 1.0001; v += 0.2) ticks.emplace_back(v, fixed2(v));
    std::string s = svg_open("coverage vs level: " + r.method + " on " + r.integrand + " (n=" +
                             std::to_string(r.n) + ", R=" + std::to_string(r.R) + ")");
    s += svg_axes(f, "nominal level", "empirical coverage", ticks, ticks);
    s += "<line id=\"reference-diagonal\" class=\"reference\" x1=\"" + fixed2(f.px(0)) + "\" y1=\"" + fixed2(f.py(0)) +
         "\" x2=\"" + fixed2(f.px(1)) + "\" y2=\"" + fixed2(f.py(1)) +
         "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    s += "<g class=\"bands\" stroke=\"steelblue\" stroke-width=\"1\">\n";
    for (std::size_t i = 0; i < r.levels.size(); ++i)
        s += "<line x1=\"" + fixed2(f.px(r.levels[i])) + "\" y1=\"" + fixed2(f.py(r.band[i].lo)) + "\" x2=\"" +
             fixed2(f.px(r.levels[i])) + "\" y2=\"" + fixed2(f.py(r.band[i].hi)) + "\"/>\n";
    s += "</g>\n<polyline class=\"coverage\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < r.levels.size(); ++i)
        s += (i ? " " : "") + fixed2(f.px(r.levels[i])) + "," + fixed2(f.py(r.coverage[i]));
    s += "\"/>\n";
    for (std::size_t i = 0; i < r.levels.size(); ++i)
        s += "<circle cx=\"" + fixed2(f.px(r.levels[i])) + "\" cy=\"" + fixed2(f.py(r.coverage[i])) +
             "\" r=\"3\" fill=\"steelblue\"/>\n";
    s += "</svg>\n";
    return s;
}

std::string comparison_svg(const ComparisonTable& t)
{
    struct P {
        double x, y;
        std::string label;
    };
    std::vector<P> pts;
    std::vector<std::string> zero_rmse;
    for (const auto& r : t.rows) {
        if (r.excluded) continue;
        if (r.rmse > 0.0 && r.modeled_cost > 0.0)
            pts.push_back({std::log10(r.modeled_cost), std::log10(r.rmse), r.label});
        else
            zero_rmse.push_back(r.label);
    }
    double x0 = 0, x1 = 1, y0 = -1, y1 = 0;
    if (!pts.empty()) {
        x0 = y0 = std::numeric_limits<double>::infinity();
        x1 = y1 = -x0;
        for (const auto& p : pts) {
            x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
        }
        x0 = std::floor(x0 - 0.1), x1 = std::ceil(x1 + 0.1);
        y0 = std::floor(y0 - 0.1), y1 = std::ceil(y1 + 0.1);
    }
    const Frame f{x0, x1, y0, y1};
    std::string s = svg_open("RMSE at equal modeled cost: " + t.integrand + " (budget " +
                             num(t.budget.budget_evals) + ")");
    s += svg_axes(f, "modeled cost (log10)", "RMSE (log10)", decade_ticks(x0, x1), decade_ticks(y0, y1));
    s += "<g class=\"methods\" font-family=\"sans-serif\" font-size=\"10\">\n";
    for (const auto& p : pts)
        s += "<circle cx=\"" + fixed2(f.px(p.x)) + "\" cy=\"" + fixed2(f.py(p.y)) +
             "\" r=\"4\" fill=\"darkorange\"/>\n<text x=\"" + fixed2(f.px(p.x) + 6) + "\" y=\"" +
             fixed2(f.py(p.y) - 6) + "\">" + xml_escape(p.label) + "</text>\n";
    s += "</g>\n";
    for (std::size_t i = 0; i < zero_rmse.size(); ++i)
        s += "<text x=\"80\" y=\"" + fixed2(Frame::T + 14 + 12 * static_cast<double>(i)) +
             "\" font-family=\"sans-serif\" font-size=\"10\">RMSE 0: " + xml_escape(zero_rmse[i]) + "</text>\n";
    s += "</svg>\n";
    return s;
}

std::string scale_growth_svg(const std::vector<ScaleGrowthReport>& reports)
{
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& r : reports)
        for (std::size_t i = 0; i < r.ns.size(); ++i) {
            const double x = std::log10(static_cast<double>(r.ns[i])), y = std::log10(r.sigma_hat[i]);
            x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = -1, y1 = 0;
    x0 = std::floor(x0 * 10 - 0.5) / 10, x1 = std::ceil(x1 * 10 + 0.5) / 10;
    y0 = std::floor(y0 - 0.1), y1 = std::ceil(y1 + 0.1);
    const Frame f{x0, x1, y0, y1};
    static const char* colors[] = {"black", "steelblue", "darkorange", "seagreen", "purple"};
    std::vector<std::pair<double, std::string>> xt;
    for (double n : {4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0})
        if (std::log10(n) >= x0 && std::log10(n) <= x1) xt.emplace_back(std::log10(n), num(n));
    std::string s = svg_open("EB scale growth, sigma_hat vs n");
    s += svg_axes(f, "n (log scale)", "sigma_hat (log10)", xt, decade_ticks(y0, y1));
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const auto& r = reports[k];
        s += "<polyline class=\"p" + std::to_string(r.p) + "\" fill=\"none\" stroke=\"" + colors[k % 5] +
             "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < r.ns.size(); ++i)
            s += (i ? " " : "") + fixed2(f.px(std::log10(static_cast<double>(r.ns[i])))) + "," +
                 fixed2(f.py(std::log10(r.sigma_hat[i])));
        s += "\"/>\n<text x=\"" + fixed2(Frame::W - 150) + "\" y=\"" + fixed2(Frame::T + 14 + 14 * static_cast<double>(k)) +
             "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + colors[k % 5] + "\">p=" + std::to_string(r.p) +
             " slope " + num(r.fitted_slope) + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

std::string render(const Estimate& e, const std::vector<double>& levels, Format f)
{
    switch (f) {
    case Format::json: return dump_json(to_json(e, levels));
    case Format::csv: {
        std::string s = "method,mu_hat,scale,interval_kind,df,n_evals,flops_linear,level,lo,hi\n";
        for (double l : levels) {
            const Interval i = e.interval(l);
            s += csv_field(e.method) + "," + num(e.mu_hat) + "," + num(e.scale) + "," +
                 std::string(to_string(e.interval_kind)) + "," + num(e.df) + "," + std::to_string(e.n_evals) + "," +
                 num(e.flops_linear) + "," + num(l) + "," + num(i.lo) + "," + num(i.hi) + "\n";
        }
        return s;
    }
    case Format::svg: throw ValidationError("svg output is not available for a single estimate; use json or csv");
    }
    return {};
}

std::string render(const CalibrationReport& r, Format f)
{
    switch (f) {
    case Format::json: return dump_json(to_json(r));
    case Format::csv: {
        std::string s = "level,coverage,lo,hi,R\n";
        for (std::size_t i = 0; i < r.levels.size(); ++i)
            s += num(r.levels[i]) + "," + num(r.coverage[i]) + "," + num(r.band[i].lo) + "," + num(r.band[i].hi) +
                 "," + std::to_string(r.R) + "\n";
        return s;
    }
    case Format::svg: return coverage_svg(r);
    }
    return {};
}

std::string render(const ComparisonTable& t, Format f)
{
    switch (f) {
    case Format::json: return dump_json(to_json(t));
    case Format::csv: {
        std::string s = "label,method,n,m,n_evals,flops_linear,modeled_cost,rmse,mean_width_99,coverage_99,excluded,"
                        "diagnostic\n";
        for (const auto& r : t.rows)
            s += csv_field(r.label) + "," + std::string(to_string(r.method)) + "," + std::to_string(r.n) + "," +
                 std::to_string(r.m) + "," + std::to_string(r.n_evals) + "," + num(r.flops_linear) + "," +
                 num(r.modeled_cost) + "," + num(r.rmse) + "," + num(r.mean_width_99) + "," + num(r.coverage_99) +
                 "," + (r.excluded ? "true" : "false") + "," + csv_field(r.diagnostic) + "\n";
        return s;
    }
    case Format::svg: return comparison_svg(t);
    }
    return {};
}

std::string render(const std::vector<ScaleGrowthReport>& reports, Format f)
{
    switch (f) {
    case Format::json: return dump_json(to_json(reports));
    case Format::csv: {
        std::string s = "p,n,sigma_hat,lengthscale,condition_number,jitter\n";
        for (const auto& r : reports)
            for (std::size_t i = 0; i < r.ns.size(); ++i)
                s += std::to_string(r.p) + "," + std::to_string(r.ns[i]) + "," + num(r.sigma_hat[i]) + "," +
                     num(r.lengthscales[i]) + "," + num(r.condition_number[i]) + "," + num(r.jitter[i]) + "\n";
        return s;
    }
    case Format::svg: return scale_growth_svg(reports);
    }
    return {};
}

void write_artifact(const std::string& path, const std::string& content)
{
    if (path == "-" || path.empty()) {
        std::cout << content << std::flush;
        if (!std::cout) throw IoError("cannot write to stdout");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.close();
    if (!out) throw IoError("failed while writing '" + path + "'");
}

} // namespace uqbench
