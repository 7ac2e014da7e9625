#include "mftd/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "mftd/errors.hpp"
#include "mftd/forward.hpp"

namespace mftd {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<std::string> words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

double to_double(const std::string& where, const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ConfigError(where + ": '" + s + "' is not a number");
    return v;
}

template <class Int>
Int to_int(const std::string& where, const std::string& s) {
    Int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ConfigError(where + ": '" + s + "' is not an integer");
    return v;
}

bool to_bool(const std::string& where, const std::string& s) {
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    throw ConfigError(where + ": '" + s + "' is not a boolean");
}

std::vector<double> to_doubles(const std::string& where, const std::string& s) {
    std::vector<double> out;
    for (const auto& w : words(s)) out.push_back(to_double(where, w));
    return out;
}

// "amp freq phase; amp freq phase"
std::vector<SeriesComponent::Sinusoid> to_sines(const std::string& where, const std::string& s) {
    std::vector<SeriesComponent::Sinusoid> out;
    for (const auto& group : split(s, ';')) {
        const auto v = to_doubles(where, group);
        if (v.size() != 3) throw ConfigError(where + ": each sinusoid needs 'amp freq phase'");
        out.push_back({v[0], v[1], v[2]});
    }
    return out;
}

std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string join_nums(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + num(v[i]);
    return s;
}

std::string join_sines(const std::vector<SeriesComponent::Sinusoid>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "; " : "") + num(v[i].amp) + " " + num(v[i].freq) + " " + num(v[i].phase);
    return s;
}

// Walks the keys of one section, rejecting any not consumed.
class Section {
public:
    Section(std::string name, const pt::ptree& tree) : name_(std::move(name)), tree_(tree) {}

    std::optional<std::string> get(const std::string& key) {
        seen_.insert(key);
        const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!v) return std::nullopt;
        return trim(*v);
    }
    std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

    void finish() const {
        for (const auto& kv : tree_)
            if (!seen_.count(kv.first)) throw ConfigError("[" + name_ + "]: unknown key '" + kv.first + "'");
    }

private:
    std::string name_;
    const pt::ptree& tree_;
    std::set<std::string> seen_;
};

bool is_builtin(const std::string& label) { return label == "sigma1" || label == "sigma2" || label == "sigma3"; }

}  // namespace

const std::vector<std::string>& known_functionals() {
    static const std::vector<std::string> names{"etd_multi", "etd_single", "music", "kirchhoff", "mkm", "oracles"};
    return names;
}

const InclusionSpec& ExperimentConfig::inclusion(const std::string& n) const {
    for (const auto& i : inclusions)
        if (i.name == n) return i;
    throw ConfigError("unknown inclusion '" + n + "'");
}

std::vector<ThinInclusion> ExperimentConfig::scene_inclusions(const SceneSpec& scene) const {
    std::vector<ThinInclusion> out;
    for (const auto& n : scene.inclusions) {
        const auto& s = inclusion(n);
        ParametricCurve curve = s.curve == "series" ? ParametricCurve::from_series(s.name, s.a, s.b, s.x, s.y)
                                                   : builtin_curve(s.curve);
        out.push_back(ThinInclusion{std::move(curve), s.h, s.eps, s.mu, eps0, mu0});
    }
    return out;
}

ExperimentConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
    }

    ExperimentConfig c;
    double h = 0.02, eps = 5.0, mu = 5.0;
    std::vector<std::pair<std::string, const pt::ptree*>> inclusion_sections, scene_sections;

    for (const auto& [name, sub] : tree) {
        if (!sub.data().empty()) throw ConfigError("key '" + name + "' appears outside any section");
        const auto parts = words(name);
        if (parts.size() == 2 && parts[0] == "inclusion") {
            inclusion_sections.emplace_back(parts[1], &sub);
            continue;
        }
        if (parts.size() == 2 && parts[0] == "scene") {
            scene_sections.emplace_back(parts[1], &sub);
            continue;
        }
        Section s(name, sub);
        if (name == "experiment") {
            if (auto v = s.get("name")) c.name = *v;
            if (auto v = s.get("seed")) c.seed = to_int<std::uint64_t>(s.where("seed"), *v);
            if (auto v = s.get("workers")) c.workers = to_int<int>(s.where("workers"), *v);
            if (auto v = s.get("functionals")) c.functionals = split(*v, ',');
        } else if (name == "incident") {
            if (auto v = s.get("L")) c.L = to_int<int>(s.where("L"), *v);
            if (auto v = s.get("K")) {
                c.K_values.clear();
                for (const auto& k : split(*v, ',')) c.K_values.push_back(to_int<int>(s.where("K"), k));
            }
            if (auto v = s.get("lambda_min")) c.lambda_min = to_double(s.where("lambda_min"), *v);
            if (auto v = s.get("lambda_max")) c.lambda_max = to_double(s.where("lambda_max"), *v);
            if (auto v = s.get("single_index")) c.single_index = to_int<std::size_t>(s.where("single_index"), *v);
        } else if (name == "grid") {
            if (auto v = s.get("lattice")) c.lattice = to_int<int>(s.where("lattice"), *v);
            if (auto v = s.get("clip")) c.clip = to_double(s.where("clip"), *v);
            if (auto v = s.get("boundary_points")) c.boundary_points = to_int<int>(s.where("boundary_points"), *v);
            if (auto v = s.get("curve_nodes")) c.curve_nodes = to_int<int>(s.where("curve_nodes"), *v);
        } else if (name == "noise") {
            if (auto v = s.get("snr_db")) {
                if (*v == "clean")
                    c.snr_db.reset();
                else
                    c.snr_db = to_double(s.where("snr_db"), *v);
            }
        } else if (name == "material") {
            if (auto v = s.get("h")) h = to_double(s.where("h"), *v);
            if (auto v = s.get("eps")) eps = to_double(s.where("eps"), *v);
            if (auto v = s.get("mu")) mu = to_double(s.where("mu"), *v);
            if (auto v = s.get("eps0")) c.eps0 = to_double(s.where("eps0"), *v);
            if (auto v = s.get("mu0")) c.mu0 = to_double(s.where("mu0"), *v);
        } else if (name == "postprocess") {
            if (auto v = s.get("fit")) c.fit = to_bool(s.where("fit"), *v);
            if (auto v = s.get("quantile")) c.ridge_quantile = to_double(s.where("quantile"), *v);
            if (auto v = s.get("degree")) c.fit_degree = to_int<int>(s.where("degree"), *v);
            if (auto v = s.get("drop_tol")) {
                if (*v == "auto")
                    c.drop_tol.reset();
                else
                    c.drop_tol = to_double(s.where("drop_tol"), *v);
            }
        } else {
            throw ConfigError("unknown section [" + name + "]");
        }
        s.finish();
    }

    for (const auto& [iname, sub] : inclusion_sections) {
        Section s("inclusion " + iname, *sub);
        InclusionSpec spec;
        spec.name = iname;
        spec.curve = s.get("curve").value_or(iname);
        spec.h = h;
        spec.eps = eps;
        spec.mu = mu;
        if (auto v = s.get("h")) spec.h = to_double(s.where("h"), *v);
        if (auto v = s.get("eps")) spec.eps = to_double(s.where("eps"), *v);
        if (auto v = s.get("mu")) spec.mu = to_double(s.where("mu"), *v);
        if (spec.curve == "series") {
            auto a = s.get("a"), b = s.get("b");
            if (!a || !b) throw ConfigError("[inclusion " + iname + "]: series curves need a and b");
            spec.a = to_double(s.where("a"), *a);
            spec.b = to_double(s.where("b"), *b);
            if (auto v = s.get("x_poly")) spec.x.poly = to_doubles(s.where("x_poly"), *v);
            if (auto v = s.get("y_poly")) spec.y.poly = to_doubles(s.where("y_poly"), *v);
            if (auto v = s.get("x_sines")) spec.x.sines = to_sines(s.where("x_sines"), *v);
            if (auto v = s.get("y_sines")) spec.y.sines = to_sines(s.where("y_sines"), *v);
        } else if (!is_builtin(spec.curve)) {
            throw ConfigError("[inclusion " + iname + "]: curve must be sigma1, sigma2, sigma3 or series");
        }
        s.finish();
        for (const auto& other : c.inclusions)
            if (other.name == iname) throw ConfigError("duplicate inclusion '" + iname + "'");
        c.inclusions.push_back(spec);
    }

    auto ensure_builtin = [&](const std::string& label) {
        for (const auto& i : c.inclusions)
            if (i.name == label) return;
        if (!is_builtin(label)) throw ConfigError("scene references unknown inclusion '" + label + "'");
        c.inclusions.push_back(InclusionSpec{label, label, 0, 0, {}, {}, h, eps, mu});
    };

    for (const auto& [sname, sub] : scene_sections) {
        Section s("scene " + sname, *sub);
        SceneSpec scene{sname, {}};
        if (auto v = s.get("inclusions")) scene.inclusions = split(*v, ',');
        s.finish();
        if (scene.inclusions.empty()) throw ConfigError("[scene " + sname + "]: no inclusions listed");
        for (const auto& n : scene.inclusions) ensure_builtin(n);
        c.scenes.push_back(scene);
    }
    if (c.scenes.empty()) {
        ensure_builtin("sigma1");
        c.scenes.push_back(SceneSpec{"sigma1", {"sigma1"}});
    }
    return c;
}

ExperimentConfig parse_config_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    return parse_config(in);
}

std::string to_text(const ExperimentConfig& c) {
    std::ostringstream o;
    o << "[experiment]\nname = " << c.name << "\nseed = " << c.seed << "\nworkers = " << c.workers
      << "\nfunctionals = ";
    for (std::size_t i = 0; i < c.functionals.size(); ++i) o << (i ? ", " : "") << c.functionals[i];
    o << "\n\n[incident]\nL = " << c.L << "\nK = ";
    for (std::size_t i = 0; i < c.K_values.size(); ++i) o << (i ? ", " : "") << c.K_values[i];
    o << "\nlambda_min = " << num(c.lambda_min) << "\nlambda_max = " << num(c.lambda_max)
      << "\nsingle_index = " << c.single_index;
    o << "\n\n[grid]\nlattice = " << c.lattice << "\nclip = " << num(c.clip) << "\nboundary_points = "
      << c.boundary_points << "\ncurve_nodes = " << c.curve_nodes;
    o << "\n\n[noise]\nsnr_db = " << (c.snr_db ? num(*c.snr_db) : std::string("clean"));
    o << "\n\n[material]\neps0 = " << num(c.eps0) << "\nmu0 = " << num(c.mu0);
    o << "\n\n[postprocess]\nfit = " << (c.fit ? "true" : "false") << "\nquantile = " << num(c.ridge_quantile)
      << "\ndegree = " << c.fit_degree << "\ndrop_tol = " << (c.drop_tol ? num(*c.drop_tol) : std::string("auto"))
      << "\n";
    for (const auto& i : c.inclusions) {
        o << "\n[inclusion " << i.name << "]\ncurve = " << i.curve << "\nh = " << num(i.h) << "\neps = " << num(i.eps)
          << "\nmu = " << num(i.mu) << "\n";
        if (i.curve == "series") {
            o << "a = " << num(i.a) << "\nb = " << num(i.b) << "\n";
            if (!i.x.poly.empty()) o << "x_poly = " << join_nums(i.x.poly) << "\n";
            if (!i.y.poly.empty()) o << "y_poly = " << join_nums(i.y.poly) << "\n";
            if (!i.x.sines.empty()) o << "x_sines = " << join_sines(i.x.sines) << "\n";
            if (!i.y.sines.empty()) o << "y_sines = " << join_sines(i.y.sines) << "\n";
        }
    }
    for (const auto& s : c.scenes) {
        o << "\n[scene " << s.name << "]\ninclusions = ";
        for (std::size_t i = 0; i < s.inclusions.size(); ++i) o << (i ? ", " : "") << s.inclusions[i];
        o << "\n";
    }
    return o.str();
}

std::vector<Diagnostic> validate(const ExperimentConfig& c) {
    std::vector<Diagnostic> out;
    auto error = [&](const std::string& m) { out.push_back({Diagnostic::Level::error, m}); };
    auto warning = [&](const std::string& m) { out.push_back({Diagnostic::Level::warning, m}); };
    auto wants = [&](const std::string& f) {
        return std::find(c.functionals.begin(), c.functionals.end(), f) != c.functionals.end();
    };

    if (c.functionals.empty()) error("no functionals selected");
    for (const auto& f : c.functionals)
        if (std::find(known_functionals().begin(), known_functionals().end(), f) == known_functionals().end())
            error("unknown functional '" + f + "'");
    if (c.workers < 0) error("workers must be >= 0");

    if (c.L < 1) error("L must be >= 1");
    if ((wants("music") || wants("kirchhoff") || wants("mkm")) && c.L < 2)
        error("MSR baselines need L >= 2 so a noise subspace exists");
    if (c.K_values.empty()) error("K needs at least one value");
    int k_min = std::numeric_limits<int>::max();
    for (int k : c.K_values) {
        if (k < 1) error("K values must be >= 1");
        k_min = std::min(k_min, k);
    }
    if (!(c.lambda_min > 0.0) || !(c.lambda_max >= c.lambda_min)) error("need 0 < lambda_min <= lambda_max");
    if (k_min != std::numeric_limits<int>::max() && c.single_index >= static_cast<std::size_t>(std::max(k_min, 1)))
        error("single_index " + std::to_string(c.single_index) + " is out of range for K = " + std::to_string(k_min));

    if (c.lattice < 2) error("lattice must be >= 2");
    if (!(c.clip > 0.0 && c.clip <= 0.95)) error("clip must lie in (0, 0.95]");
    if (c.boundary_points < 16) error("boundary_points must be >= 16");
    const bool td = wants("etd_multi") || wants("etd_single") || c.fit;
    if (td && c.boundary_points < 64) error("topological-derivative maps need boundary_points >= 64");
    if (c.curve_nodes < 8) error("curve_nodes must be >= 8");
    if (c.snr_db && !std::isfinite(*c.snr_db)) error("snr_db must be finite (use 'clean' for noise-free data)");
    if (!(c.eps0 > 0.0 && c.mu0 > 0.0) || std::abs(c.eps0 * c.mu0 - 1.0) > 1e-12)
        error("background must satisfy eps0 * mu0 = 1 (unit background wavenumber)");

    if (c.fit) {
        if (!(c.ridge_quantile > 0.0 && c.ridge_quantile < 1.0)) error("ridge quantile must lie in (0, 1)");
        if (c.fit_degree < 1) error("fit degree must be >= 1");
        if (!wants("etd_multi")) error("fitting uses the etd_multi map; add it to functionals");
    }
    if (c.drop_tol && !(*c.drop_tol > 0.0 && *c.drop_tol <= 1.0)) error("drop_tol must lie in (0, 1]");

    if (c.scenes.empty()) error("no scenes defined");
    for (const auto& spec : c.inclusions) {
        if (spec.h > c.lambda_min / 10.0)
            error("inclusion '" + spec.name + "': thickness-vs-wavelength violation, h = " + num(spec.h) +
                  " exceeds lambda_min / 10 = " + num(c.lambda_min / 10.0));
    }
    for (const auto& scene : c.scenes) {
        try {
            for (const auto& inc : c.scene_inclusions(scene)) {
                try {
                    inc.validate(c.lambda_min);
                } catch (const Error& e) {
                    if (inc.half_thickness <= c.lambda_min / 10.0) error(e.what());
                }
                check_clearance(discretize(inc.curve, std::max(c.curve_nodes, 8)), 0.1);
            }
            const auto incs = c.scene_inclusions(scene);
            for (std::size_t i = 0; i < incs.size(); ++i)
                for (std::size_t j = i + 1; j < incs.size(); ++j) {
                    const auto di = discretize(incs[i].curve, 200), dj = discretize(incs[j].curve, 200);
                    double gap = std::numeric_limits<double>::infinity();
                    for (const Vec2& p : di.nodes) gap = std::min(gap, distance_to_curve(p, dj));
                    if (gap <= incs[i].half_thickness + incs[j].half_thickness)
                        error("scene '" + scene.name + "': inclusions " + std::to_string(i + 1) + " and " +
                              std::to_string(j + 1) + " overlap (gap " + num(gap) + ")");
                }
        } catch (const Error& e) {
            error("scene '" + scene.name + "': " + e.what());
        }
    }

    if (c.lambda_min > 0.0 && c.lambda_max >= c.lambda_min && c.L >= 1) {
        std::set<double> seen;
        for (int K : c.K_values) {
            if (K < 1 || (K > 1 && c.lambda_max == c.lambda_min)) continue;
            try {
                for (double w : make_incident_set(c.L, K, c.lambda_min, c.lambda_max).omegas) {
                    if (!seen.insert(w).second) continue;
                    if (const auto hit = find_resonance(w)) {
                        warning("resonance: omega = " + num(w) + " is near a Neumann eigenvalue (n = " +
                                std::to_string(hit->order) + ", |J_n'(omega)| = " + num(std::abs(hit->derivative)) +
                                ")");
                    }
                }
            } catch (const Error& e) {
                error(e.what());
            }
        }
    }
    return out;
}

std::vector<Diagnostic> validate_text(const std::string& text) {
    try {
        return validate(parse_config_text(text));
    } catch (const Error& e) {
        return {{Diagnostic::Level::error, e.what()}};
    }
}

}  // namespace mftd
