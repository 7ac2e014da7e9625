#include "mftd/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <openssl/evp.h>

#include "mftd/baselines.hpp"
#include "mftd/forward.hpp"
#include "mftd/image_io.hpp"
#include "mftd/imaging.hpp"
#include "mftd/oracles.hpp"
#include "mftd/postprocess.hpp"
#include "mftd/seeding.hpp"

namespace mftd {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <class F>
auto staged(const std::string& stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(stage, e);
    }
}

class Writer {
public:
    explicit Writer(fs::path dir) : dir_(std::move(dir)) {}

    void put(const std::string& name, const std::string& content) {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) throw FormatError("cannot write '" + (dir_ / name).string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw FormatError("failed writing '" + name + "'");
        hashes_[name] = git_blob_sha1(content);
    }

    void map(const std::string& stem, const ImageGrid& g) {
        std::ostringstream csv, pgm;
        write_csv(csv, g);
        write_pgm(pgm, g);
        put(stem + ".csv", csv.str());
        put(stem + ".pgm", pgm.str());
    }

    const std::map<std::string, std::string>& hashes() const { return hashes_; }

private:
    fs::path dir_;
    std::map<std::string, std::string> hashes_;
};

void stamp(ImageGrid& g, const BoundaryDataset& data) {
    g.meta.noisy = data.noise.applied;
    g.meta.snr_db = data.noise.applied ? data.noise.snr_db : 0.0;
    g.meta.seed = data.noise.seed;
}

// Nearest true inclusion (by RMS distance) for each fitted curve.
std::size_t nearest_truth(const ChebyshevCurve& fit, const std::vector<CurveDiscretization>& truth) {
    std::size_t best = 0;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double r = rms_distance(fit, truth[i]);
        if (r < d) d = r, best = i;
    }
    return best;
}

}  // namespace

std::string git_blob_sha1(const std::string& content) {
    const std::string header = "blob " + std::to_string(content.size()) + std::string(1, '\0');
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw StateError("cannot allocate a digest context");
    const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                    EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                    EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                    EVP_DigestFinal_ex(ctx, md, &len) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok) throw StateError("SHA-1 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

ArtifactBundle run_experiment(const ExperimentConfig& config_in, const std::string& out_dir, const RunOptions& opts) {
    ExperimentConfig c = config_in;
    if (opts.seed) c.seed = *opts.seed;
    if (opts.workers) c.workers = *opts.workers;
    for (const auto& d : validate(c))
        if (d.level == Diagnostic::Level::error) throw ConfigError(d.message);

    auto log = [&](const std::string& s) {
        if (opts.log) *opts.log << s << '\n' << std::flush;
    };
    auto wants = [&](const std::string& f) {
        return std::find(c.functionals.begin(), c.functionals.end(), f) != c.functionals.end();
    };

    fs::create_directories(out_dir);
    Writer w(out_dir);
    const auto lattice = Lattice::make(c.lattice, c.clip);
    const BoundaryGrid grid = boundary_grid(c.boundary_points);
    SynthesisOptions sopt;
    sopt.workers = c.workers;
    ImagingOptions iopt;
    iopt.workers = c.workers;
    std::ostringstream metrics;
    metrics << "scene\tK\tmap\tmetric\tvalue\n";

    for (const auto& scene : c.scenes) {
        const auto truth = c.scene_inclusions(scene);
        std::vector<CurveDiscretization> truth_disc;
        for (const auto& t : truth) truth_disc.push_back(discretize(t.curve, 400));

        for (int K : c.K_values) {
            const std::string tag = scene.name + "_K" + std::to_string(K);
            log("[" + tag + "] synthesize");
            const IncidentSet incident = make_incident_set(c.L, K, c.lambda_min, c.lambda_max);
            const BoundaryDataset clean =
                staged("synthesize " + tag, [&] { return synthesize(truth, incident, grid, c.curve_nodes, sopt); });
            const BoundaryDataset data = staged("noise " + tag, [&] {
                if (!c.snr_db) return clean;
                return add_awgn(clean, *c.snr_db, stage_seed(c.seed, "noise/" + tag));
            });
            {
                std::ostringstream ds;
                write_dataset(ds, data);
                w.put(tag + "_dataset.txt", ds.str());
            }

            auto emit = [&](const std::string& name, ImageGrid g) {
                stamp(g, data);
                w.map(tag + "_" + name, g);
                metrics << scene.name << '\t' << K << '\t' << name << "\tlocalization\t"
                        << num(localization_metric(g, truth_disc)) << '\n';
                return g;
            };
            const std::size_t ks = c.single_index;

            std::optional<ImageGrid> multi;
            if (wants("etd_multi")) {
                log("[" + tag + "] etd_multi");
                multi = emit("etd_multi", staged("image etd_multi " + tag, [&] {
                                 return etd_multi(lattice, data, all_frequencies(data), iopt);
                             }));
            }
            if (wants("etd_single")) {
                log("[" + tag + "] etd_single");
                emit("etd_single", staged("image etd_single " + tag, [&] { return etd_single(lattice, data, ks, iopt); }));
            }
            if (wants("music") || wants("kirchhoff")) {
                const MsrMatrix msr = staged("msr " + tag, [&] { return assemble_msr(data, ks); });
                if (wants("music")) {
                    log("[" + tag + "] music");
                    emit("music", staged("baseline music " + tag, [&] {
                             MusicOptions mo;
                             mo.workers = c.workers;
                             const int M = signal_space_dim(msr, c.effective_drop_tol());
                             return music_map(lattice, msr, incident.directions, M, mo);
                         }));
                }
                if (wants("kirchhoff")) {
                    log("[" + tag + "] kirchhoff");
                    emit("kirchhoff", staged("baseline kirchhoff " + tag, [&] {
                             KirchhoffOptions ko;
                             ko.workers = c.workers;
                             return kirchhoff_map(lattice, msr, incident.directions, ko);
                         }));
                }
            }
            if (wants("mkm")) {
                log("[" + tag + "] mkm");
                emit("mkm", staged("baseline mkm " + tag, [&] {
                         std::vector<MsrMatrix> msrs;
                         for (std::size_t k = 0; k < data.K(); ++k) msrs.push_back(assemble_msr(data, k));
                         KirchhoffOptions ko;
                         ko.workers = c.workers;
                         return multi_kirchhoff_map(lattice, msrs, incident.directions, ko);
                     }));
            }
            if (wants("oracles")) {
                log("[" + tag + "] oracles");
                OracleOptions oo;
                oo.workers = c.workers;
                oo.m_nodes = c.curve_nodes;
                staged("oracles " + tag, [&] {
                    emit("closed_form_eps", closed_form_eps_map(lattice, truth, incident, ks, oo));
                    if (K > 1) {
                        auto e12 = oracle_E1_E2(lattice, truth, incident, 0, incident.K() - 1, oo);
                        emit("oracle_E1", e12.first);
                        auto e34 = oracle_E3_E4(lattice, truth, incident, incident.omegas.front(),
                                                incident.omegas.back(), oo);
                        emit("oracle_E3", e34.first);
                    }
                    emit("oracle_E5", oracle_E5_E6(lattice, truth, incident, oo).first);
                    return 0;
                });
            }

            if (c.fit) {
                log("[" + tag + "] fit");
                std::vector<FitRow> rows;
                staged("postprocess " + tag, [&] {
                    auto clusters = extract_ridge_clusters(*multi, c.ridge_quantile);
                    if (clusters.size() < truth.size())
                        throw ExtractionError("found " + std::to_string(clusters.size()) + " ridge clusters for " +
                                              std::to_string(truth.size()) + " inclusions");
                    clusters.resize(truth.size());
                    std::vector<ThinInclusion> fitted;
                    for (std::size_t i = 0; i < clusters.size(); ++i) {
                        const ChebyshevCurve fit = chebyshev_fit(clusters[i], c.fit_degree);
                        const std::size_t j = nearest_truth(fit, truth_disc);
                        const std::string label =
                            truth.size() == 1 ? scene.name : scene.name + "_M" + std::to_string(i + 1);
                        ThinInclusion f = truth[j];
                        f.curve = fit.to_curve(label);
                        fitted.push_back(f);
                        rows.push_back(FitRow{label, fit, {}});
                        metrics << scene.name << '\t' << K << '\t' << label << "\trms_to_" << truth[j].curve.label()
                                << '\t' << num(rms_distance(fit, truth_disc[j])) << '\n';
                    }
                    const BoundaryDataset comp = synthesize(fitted, incident, grid, c.curve_nodes, sopt);
                    const DiscrepancyReport norms = discrete_norms(clean, comp, 0);
                    for (auto& r : rows) r.norms = norms;
                    return 0;
                });
                std::ostringstream rep;
                write_fit_report(rep, rows);
                w.put(tag + "_fit.txt", rep.str());
            }
        }
    }
    w.put("metrics.txt", metrics.str());

    ArtifactBundle bundle;
    bundle.directory = out_dir;
    std::ostringstream man;
    man << "# mftd manifest v1\n" << to_text(c) << "\n[files]\n";
    for (const auto& [name, hash] : w.hashes()) {
        man << hash << "  " << name << '\n';
        bundle.files.push_back(name);
    }
    bundle.manifest = man.str();
    std::ofstream mf(fs::path(out_dir) / "manifest.txt", std::ios::binary);
    mf << bundle.manifest;
    if (!mf) throw FormatError("failed writing manifest");
    return bundle;
}

const std::vector<Preset>& presets() {
    static const std::vector<Preset> list{
        {"sigma1_sweep_L4", "sigma1, L = 4, 15 dB, K = 1, 5, 10, 16",
         "[experiment]\nname = sigma1_sweep_L4\nseed = 4\nfunctionals = etd_multi\n\n"
         "[incident]\nL = 4\nK = 1, 5, 10, 16\n\n[noise]\nsnr_db = 15\n\n"
         "[scene sigma1]\ninclusions = sigma1\n"},
        {"sigma2_L4", "sigma2, L = 4, 15 dB, K = 4, 16",
         "[experiment]\nname = sigma2_L4\nseed = 5\nfunctionals = etd_multi\n\n"
         "[incident]\nL = 4\nK = 4, 16\n\n[noise]\nsnr_db = 15\n\n"
         "[scene sigma2]\ninclusions = sigma2\n"},
        {"sigma3_L4", "sigma3, L = 4, 15 dB, K = 4, 16",
         "[experiment]\nname = sigma3_L4\nseed = 6\nfunctionals = etd_multi\n\n"
         "[incident]\nL = 4\nK = 4, 16\n\n[noise]\nsnr_db = 15\n\n"
         "[scene sigma3]\ninclusions = sigma3\n"},
        {"pair_L4", "sigma1 and sigma2 together, same and different materials, L = 4, K = 4, 16",
         "[experiment]\nname = pair_L4\nseed = 7\nfunctionals = etd_multi\n\n"
         "[incident]\nL = 4\nK = 4, 16\n\n[noise]\nsnr_db = 15\n\n"
         "[inclusion sigma2_hi]\ncurve = sigma2\neps = 10\nmu = 10\n\n"
         "[scene multi_same]\ninclusions = sigma1, sigma2\n\n"
         "[scene multi_diff]\ninclusions = sigma1, sigma2_hi\n"},
        {"sigma12_L16", "sigma1 and sigma2, L = 16, K = 16",
         "[experiment]\nname = sigma12_L16\nseed = 8\nfunctionals = etd_multi\n\n"
         "[incident]\nL = 16\nK = 16\n\n[noise]\nsnr_db = 15\n\n"
         "[scene sigma1]\ninclusions = sigma1\n\n[scene sigma2]\ninclusions = sigma2\n"},
        {"sigma3_L16", "sigma3, L = 16, K = 4, 16",
         "[experiment]\nname = sigma3_L16\nseed = 9\nfunctionals = etd_multi\n\n"
         "[incident]\nL = 16\nK = 4, 16\n\n[noise]\nsnr_db = 15\n\n"
         "[scene sigma3]\ninclusions = sigma3\n"},
        {"baselines_sigma3", "sigma3, L = 16, clean: MUSIC at 2 pi / 0.5, multi-frequency Kirchhoff, K = 16 map",
         "[experiment]\nname = baselines_sigma3\nseed = 10\nfunctionals = etd_multi, music, mkm\n\n"
         "[incident]\nL = 16\nK = 16\nsingle_index = 0\n\n[noise]\nsnr_db = clean\n\n"
         "[scene sigma3]\ninclusions = sigma3\n"},
        {"pair_L16", "sigma1 and sigma2 together, same and different materials, K = L = 16",
         "[experiment]\nname = pair_L16\nseed = 11\nfunctionals = etd_multi\n\n"
         "[incident]\nL = 16\nK = 16\n\n[noise]\nsnr_db = 15\n\n"
         "[inclusion sigma2_hi]\ncurve = sigma2\neps = 10\nmu = 10\n\n"
         "[scene multi_same]\ninclusions = sigma1, sigma2\n\n"
         "[scene multi_diff]\ninclusions = sigma1, sigma2_hi\n"},
        {"initial_guess", "Chebyshev initial guesses and discrete norms, L = 4, K = 16, 15 dB",
         "[experiment]\nname = initial_guess\nseed = 12\nfunctionals = etd_multi\n\n"
         "[incident]\nL = 4\nK = 16\n\n[noise]\nsnr_db = 15\n\n[postprocess]\nfit = true\nquantile = 0.01\n"
         "degree = 5\n\n"
         "[scene sigma1]\ninclusions = sigma1\n\n[scene sigma2]\ninclusions = sigma2\n\n"
         "[scene sigma3]\ninclusions = sigma3\n\n[scene multi]\ninclusions = sigma1, sigma2\n"},
    };
    return list;
}

std::vector<std::string> export_presets(const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::vector<std::string> paths;
    for (const auto& p : presets()) {
        const fs::path path = fs::path(out_dir) / (p.name + ".cfg");
        std::ofstream out(path, std::ios::binary);
        out << "# " << p.description << "\n" << p.text;
        if (!out) throw FormatError("failed writing '" + path.string() + "'");
        paths.push_back(path.string());
    }
    return paths;
}

}  // namespace mftd
