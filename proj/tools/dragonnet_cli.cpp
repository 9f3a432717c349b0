// Command-line front end; talks to libdragonnet through the C API only.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dragonnet/dragonnet_c.h"

namespace fs = std::filesystem;

namespace {

[[noreturn]] void die(const std::string& context) {
    std::cerr << "error: " << context;
    const char* msg = drg_last_error();
    if (msg && *msg) std::cerr << ": " << msg;
    std::cerr << "\n";
    std::exit(1);
}

void check(drg_status st, const std::string& context) {
    if (st != DRG_OK) die(context);
}

// write-to-temp then rename, so failures never leave partial files behind
class AtomicFile {
public:
    explicit AtomicFile(const fs::path& target)
        : target_(target), tmp_(target.string() + ".tmp") {}

    const std::string& tmp_path() const { return tmp_; }

    void commit() {
        std::error_code ec;
        fs::rename(tmp_, target_, ec);
        if (ec) {
            fs::remove(tmp_);
            die("cannot move " + tmp_ + " to " + target_.string() + ": " + ec.message());
        }
        committed_ = true;
    }

    ~AtomicFile() {
        if (!committed_) {
            std::error_code ec;
            fs::remove(tmp_, ec);
        }
    }

private:
    fs::path target_;
    std::string tmp_;
    bool committed_ = false;
};

struct VariantSpec {
    std::string name;       // e.g. "mod-euclidean"
    drg_variant variant;
    drg_metric metric;
};

const std::vector<VariantSpec> kKnownVariants = {
    {"baseline", DRG_VARIANT_BASELINE, DRG_METRIC_EUCLIDEAN},
    {"mod-euclidean", DRG_VARIANT_MODIFIED, DRG_METRIC_EUCLIDEAN},
    {"mod-manhattan", DRG_VARIANT_MODIFIED, DRG_METRIC_MANHATTAN},
    {"mod-chebyshev", DRG_VARIANT_MODIFIED, DRG_METRIC_CHEBYSHEV},
};

const VariantSpec& lookup_variant(const std::string& name) {
    for (const auto& v : kKnownVariants)
        if (v.name == name) return v;
    std::cerr << "error: unknown variant '" << name << "'\n";
    std::exit(1);
}

// FNV-1a over the realization id, mixed with the base seed, so --limit
// prefixes of a run reuse the same per-realization seeds
std::uint64_t derive_seed(std::uint64_t base, const std::string& tag) {
    std::uint64_t h = 14695981039346656037ULL ^ base;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

struct TrainFlags {
    int k = 10;
    double alpha = 1.0;
    double beta = 1.0;
    double val_frac = 0.2;
    int epochs = 300;
    int batch_size = 64;
    int patience = 20;
    double lr = 1e-5;
    double momentum = 0.9;
    bool no_standardize = false;
    std::uint64_t seed = 0;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--k", k, "Neighbor count for outcome averaging")
            ->capture_default_str();
        cmd->add_option("--alpha", alpha, "Propensity cross-entropy weight")
            ->capture_default_str();
        cmd->add_option("--beta", beta, "Targeted-regularization weight")
            ->capture_default_str();
        cmd->add_option("--val-frac", val_frac, "Validation fraction for early stopping")
            ->capture_default_str();
        cmd->add_option("--epochs", epochs, "Maximum training epochs")
            ->capture_default_str();
        cmd->add_option("--batch-size", batch_size, "Mini-batch size")
            ->capture_default_str();
        cmd->add_option("--patience", patience, "Early-stopping patience in epochs")
            ->capture_default_str();
        cmd->add_option("--lr", lr, "SGD learning rate")->capture_default_str();
        cmd->add_option("--momentum", momentum, "SGD momentum")->capture_default_str();
        cmd->add_flag("--no-standardize", no_standardize,
                      "Compute distances and network inputs on raw covariates");
        cmd->add_option("--seed", seed, "Base RNG seed")->capture_default_str();
    }

    drg_train_options to_options(const VariantSpec& v, std::uint64_t run_seed) const {
        drg_train_options o;
        drg_train_options_init(&o);
        o.variant = v.variant;
        o.metric = v.metric;
        o.k = k;
        o.alpha = alpha;
        o.beta = beta;
        o.validation_fraction = val_frac;
        o.epochs = epochs;
        o.batch_size = batch_size;
        o.patience = patience;
        o.learning_rate = lr;
        o.momentum = momentum;
        o.seed = run_seed;
        o.standardize_covariates = no_standardize ? 0 : 1;
        return o;
    }
};

std::string default_out_dir() {
    const char* env = std::getenv("DRAGONNET_OUT_DIR");
    return env && *env ? env : ".";
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// ---- generate ---------------------------------------------------------

int cmd_generate(int64_t n, int64_t d, double ate, double confounding,
                 double noise_sd, std::uint64_t seed, const std::string& out) {
    drg_synthetic_spec spec;
    drg_synthetic_spec_init(&spec);
    spec.n = n;
    spec.d = d;
    spec.ate_target = ate;
    spec.confounding_strength = confounding;
    spec.noise_sd = noise_sd;
    spec.seed = seed;

    drg_dataset* ds = nullptr;
    check(drg_dataset_generate(&spec, &ds), "generating dataset");
    AtomicFile file(out);
    check(drg_dataset_save_csv(ds, file.tmp_path().c_str()), "writing " + out);
    file.commit();
    double true_ate = 0.0;
    check(drg_dataset_true_ate(ds, &true_ate), "reading ground truth");
    std::cout << "wrote " << out << " (n=" << drg_dataset_num_samples(ds)
              << ", d=" << drg_dataset_num_features(ds)
              << ", treated=" << drg_dataset_num_treated(ds)
              << ", true ATE=" << fmt(true_ate) << ")\n";
    drg_dataset_free(ds);
    return 0;
}

// ---- train -------------------------------------------------------------

int cmd_train(const std::string& data_path, const std::string& variant_name,
              const TrainFlags& flags, double test_frac,
              const std::string& snapshot, bool distance_set, bool k_set) {
    const VariantSpec& variant = lookup_variant(variant_name);
    if (variant.variant == DRG_VARIANT_BASELINE && (distance_set || k_set))
        std::cerr << "warning: baseline variant ignores --distance/--k\n";

    drg_dataset* full = nullptr;
    check(drg_dataset_load_csv(data_path.c_str(), &full), "loading " + data_path);

    drg_dataset* train_part = full;
    drg_dataset* test_part = nullptr;
    if (test_frac > 0.0)
        check(drg_dataset_split_off_test(full, test_frac, derive_seed(flags.seed, "split"),
                                         &train_part, &test_part),
              "splitting off test set");

    const drg_train_options opts = flags.to_options(variant, flags.seed);
    drg_model* model = nullptr;
    check(drg_train(train_part, &opts, &model), "training " + variant_name);

    drg_metrics m;
    const drg_dataset* eval_ds = test_part ? test_part : full;
    check(drg_model_evaluate(model, eval_ds, 0, &m), "evaluating");

    std::cout << "model,eval_scope,eps_ate,eps_pehe,eps_pehe_root,psi_hat\n";
    std::cout << variant_name << "," << (test_part ? "held-out" : "in-sample") << ","
              << fmt(m.eps_ate) << "," << fmt(m.eps_pehe) << ","
              << fmt(m.eps_pehe_root) << "," << fmt(m.psi_hat) << "\n";

    if (!snapshot.empty()) {
        AtomicFile file(snapshot);
        check(drg_model_save(model, file.tmp_path().c_str()), "writing " + snapshot);
        file.commit();
    }

    drg_model_free(model);
    if (test_part) {
        drg_dataset_free(train_part);
        drg_dataset_free(test_part);
    }
    drg_dataset_free(full);
    return 0;
}

// ---- bench -------------------------------------------------------------

struct BenchRecord {
    std::string model;
    std::string realization;
    drg_metrics metrics;
};

void write_profile_csv(const fs::path& path, const std::vector<std::string>& models,
                       const std::vector<double>& values_rowmajor,
                       int64_t n_problems) {
    const int64_t n_models = static_cast<int64_t>(models.size());
    std::vector<double> taus;
    for (double t = 1.0; t <= 10.0 + 1e-12; t += 0.05) taus.push_back(t);
    std::vector<double> rho(taus.size() * static_cast<std::size_t>(n_models));
    check(drg_performance_profile(values_rowmajor.data(), n_problems, n_models,
                                  taus.data(), static_cast<int64_t>(taus.size()),
                                  rho.data()),
          "computing performance profile");

    AtomicFile file(path);
    std::ofstream os(file.tmp_path());
    os << "tau";
    for (const auto& m : models) os << "," << m;
    os << "\n";
    for (std::size_t ti = 0; ti < taus.size(); ++ti) {
        os << fmt(taus[ti]);
        for (int64_t m = 0; m < n_models; ++m)
            os << "," << fmt(rho[ti * static_cast<std::size_t>(n_models) +
                                 static_cast<std::size_t>(m)]);
        os << "\n";
    }
    os.close();
    if (!os) die("writing " + path.string());
    file.commit();
}

void write_far_report(const fs::path& csv_path, const std::string& metric_label,
                      const std::vector<std::string>& models,
                      const std::vector<double>& values_rowmajor,
                      int64_t n_problems) {
    const int64_t n_models = static_cast<int64_t>(models.size());
    double far_stat = 0.0;
    int64_t best = 0;
    std::vector<double> ranks(static_cast<std::size_t>(n_models));
    std::vector<double> pvals(static_cast<std::size_t>(n_models));
    std::vector<double> adjusted(static_cast<std::size_t>(n_models));
    std::vector<int> decisions(static_cast<std::size_t>(n_models));
    check(drg_far_test(values_rowmajor.data(), n_problems, n_models, &far_stat, &best,
                       ranks.data(), pvals.data(), adjusted.data(), decisions.data()),
          "running FAR test");

    auto decision_text = [](int d) {
        return d < 0 ? "-" : (d == 1 ? "Reject" : "Fail to reject");
    };

    // sort models by average aligned rank for the report
    std::vector<std::size_t> order(models.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return ranks[a] < ranks[b]; });

    std::printf("\nFAR test (%s), statistic T = %.6g\n", metric_label.c_str(), far_stat);
    std::printf("%-28s %12s %12s  %s\n", "model", "avg rank", "p_F-value",
                "null hypothesis");
    for (std::size_t i : order) {
        if (static_cast<int64_t>(i) == best)
            std::printf("%-28s %12.3f %12s  %s\n", models[i].c_str(), ranks[i], "-", "-");
        else
            std::printf("%-28s %12.3f %12.6f  %s\n", models[i].c_str(), ranks[i],
                        adjusted[i], decision_text(decisions[i]));
    }

    AtomicFile file(csv_path);
    std::ofstream os(file.tmp_path());
    os << "model,avg_aligned_rank,far_statistic,p_raw,p_finner,decision\n";
    for (std::size_t i : order) {
        os << models[i] << "," << fmt(ranks[i]) << "," << fmt(far_stat) << ",";
        if (static_cast<int64_t>(i) == best)
            os << "-,-,-\n";
        else
            os << fmt(pvals[i]) << "," << fmt(adjusted[i]) << ","
               << decision_text(decisions[i]) << "\n";
    }
    os.close();
    if (!os) die("writing " + csv_path.string());
    file.commit();
}

int cmd_bench(const std::string& dir, std::vector<std::string> variant_names,
              const TrainFlags& flags, double test_frac, int limit,
              const std::string& out_dir_str, bool save_models) {
    if (variant_names.empty())
        for (const auto& v : kKnownVariants) variant_names.push_back(v.name);
    for (const auto& name : variant_names) lookup_variant(name);  // validate early

    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    if (ec) die("cannot read directory " + dir + ": " + ec.message());
    std::sort(files.begin(), files.end());
    if (limit > 0 && static_cast<std::size_t>(limit) < files.size())
        files.resize(static_cast<std::size_t>(limit));
    if (files.empty()) die("no realization .csv files in " + dir);

    const fs::path out_dir(out_dir_str);
    fs::create_directories(out_dir, ec);

    std::vector<BenchRecord> records;
    std::vector<std::string> failed;
    for (const auto& file : files) {
        const std::string realization = file.stem().string();
        const std::uint64_t realization_seed = derive_seed(flags.seed, realization);

        drg_dataset* full = nullptr;
        if (drg_dataset_load_csv(file.string().c_str(), &full) != DRG_OK) {
            std::cerr << "warning: skipping " << file << ": " << drg_last_error() << "\n";
            failed.push_back(realization);
            continue;
        }
        drg_dataset* train_part = full;
        drg_dataset* test_part = nullptr;
        if (test_frac > 0.0 &&
            drg_dataset_split_off_test(full, test_frac,
                                       derive_seed(realization_seed, "split"),
                                       &train_part, &test_part) != DRG_OK) {
            std::cerr << "warning: skipping " << file << ": " << drg_last_error() << "\n";
            failed.push_back(realization);
            drg_dataset_free(full);
            continue;
        }

        bool realization_ok = true;
        for (const auto& name : variant_names) {
            const VariantSpec& variant = lookup_variant(name);
            const drg_train_options opts =
                flags.to_options(variant, derive_seed(realization_seed, name));
            drg_model* model = nullptr;
            drg_metrics m;
            if (drg_train(train_part, &opts, &model) != DRG_OK ||
                drg_model_evaluate(model, test_part ? test_part : full, 0, &m) != DRG_OK) {
                std::cerr << "warning: " << name << " failed on " << realization << ": "
                          << drg_last_error() << "\n";
                drg_model_free(model);
                realization_ok = false;
                break;
            }
            records.push_back({name, realization, m});
            if (save_models) {
                const fs::path snap_dir = out_dir / "models" / name;
                fs::create_directories(snap_dir, ec);
                const fs::path snap = snap_dir / (realization + ".snap");
                AtomicFile sf(snap);
                if (drg_model_save(model, sf.tmp_path().c_str()) == DRG_OK) sf.commit();
            }
            drg_model_free(model);
        }
        if (!realization_ok) {
            failed.push_back(realization);
            records.erase(std::remove_if(records.begin(), records.end(),
                                         [&](const BenchRecord& r) {
                                             return r.realization == realization;
                                         }),
                          records.end());
        }
        if (test_part) {
            drg_dataset_free(train_part);
            drg_dataset_free(test_part);
        }
        drg_dataset_free(full);
        std::cerr << "done " << realization
                  << (realization_ok ? "" : " (failed)") << "\n";
    }

    if (records.empty()) die("all realizations failed");

    std::sort(records.begin(), records.end(), [](const BenchRecord& a, const BenchRecord& b) {
        return std::tie(a.realization, a.model) < std::tie(b.realization, b.model);
    });

    {
        AtomicFile file(out_dir / "records.csv");
        std::ofstream os(file.tmp_path());
        os << "model,realization,eps_ate,eps_pehe,eps_pehe_root,psi_hat\n";
        for (const auto& r : records)
            os << r.model << "," << r.realization << "," << fmt(r.metrics.eps_ate) << ","
               << fmt(r.metrics.eps_pehe) << "," << fmt(r.metrics.eps_pehe_root) << ","
               << fmt(r.metrics.psi_hat) << "\n";
        os.close();
        if (!os) die("writing records.csv");
        file.commit();
    }

    // problems with a complete row of results, in sorted order
    std::vector<std::string> ok_realizations;
    {
        std::map<std::string, std::size_t> counts;
        for (const auto& r : records) counts[r.realization]++;
        for (const auto& [id, c] : counts)
            if (c == variant_names.size()) ok_realizations.push_back(id);
    }
    std::sort(variant_names.begin(), variant_names.end());

    for (const char* metric_label : {"eps_ate", "eps_pehe"}) {
        std::vector<double> matrix;
        matrix.reserve(ok_realizations.size() * variant_names.size());
        for (const auto& id : ok_realizations)
            for (const auto& name : variant_names)
                for (const auto& r : records)
                    if (r.realization == id && r.model == name) {
                        matrix.push_back(std::string(metric_label) == "eps_ate"
                                             ? r.metrics.eps_ate
                                             : r.metrics.eps_pehe);
                        break;
                    }
        const auto n_problems = static_cast<int64_t>(ok_realizations.size());
        write_profile_csv(out_dir / (std::string("profile_") + metric_label + ".csv"),
                          variant_names, matrix, n_problems);
        if (variant_names.size() >= 2 && n_problems >= 2)
            write_far_report(out_dir / (std::string("far_") + metric_label + ".csv"),
                             metric_label, variant_names, matrix, n_problems);
        else
            std::cerr << "warning: FAR test for " << metric_label
                      << " needs >=2 models and >=2 realizations, skipped\n";
    }

    std::cout << "\nbench complete: " << ok_realizations.size() << " realizations x "
              << variant_names.size() << " models -> " << out_dir_str << "\n";
    if (!failed.empty())
        std::cout << failed.size() << " realization(s) skipped due to errors\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Treatment-effect estimation with neighbor-augmented Dragonnet models"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write a synthetic realization CSV with known ground truth");
    int64_t gen_n = 1000, gen_d = 5;
    double gen_ate = 1.0, gen_conf = 1.0, gen_noise = 1.0;
    std::uint64_t gen_seed = 0;
    std::string gen_out = "synthetic.csv";
    gen->add_option("--n", gen_n, "Sample count")->capture_default_str();
    gen->add_option("--d", gen_d, "Covariate count")->capture_default_str();
    gen->add_option("--ate", gen_ate, "True (constant) treatment effect")->capture_default_str();
    gen->add_option("--confounding", gen_conf, "Confounding strength")->capture_default_str();
    gen->add_option("--noise-sd", gen_noise, "Outcome noise standard deviation")->capture_default_str();
    gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
    gen->add_option("--out", gen_out, "Output CSV path")->capture_default_str();

    // train
    auto* tr = app.add_subcommand("train", "Train one model on a realization and print its metrics");
    std::string tr_data, tr_variant = "mod-euclidean", tr_snapshot;
    std::string tr_distance = "euclidean";
    double tr_test_frac = 0.0;
    TrainFlags tr_flags;
    tr->add_option("--data", tr_data, "Realization CSV")->required();
    tr->add_option("--variant", tr_variant,
                   "Model variant: baseline, mod-euclidean, mod-manhattan, mod-chebyshev")
        ->capture_default_str();
    auto* dist_opt = tr->add_option("--distance", tr_distance,
                                    "Distance metric alias; folded into --variant")
                         ->capture_default_str();
    tr_flags.add_to(tr);
    tr->add_option("--test-frac", tr_test_frac,
                   "Hold out this fraction for evaluation (0 = in-sample)")
        ->capture_default_str();
    tr->add_option("--snapshot", tr_snapshot, "Write the trained model snapshot here");

    // bench
    auto* be = app.add_subcommand("bench", "Train/evaluate model variants over a realization directory");
    std::string be_dir, be_out = default_out_dir();
    std::vector<std::string> be_variants;
    double be_test_frac = 0.0;
    int be_limit = 0;
    bool be_save_models = false;
    TrainFlags be_flags;
    be->add_option("--dir", be_dir, "Directory of realization CSV files")->required();
    be->add_option("--variants", be_variants,
                   "Variants to run (default: baseline and all three modified)");
    be_flags.add_to(be);
    be->add_option("--test-frac", be_test_frac,
                   "Hold out this fraction per realization (0 = in-sample)")
        ->capture_default_str();
    be->add_option("--limit", be_limit, "Use only the first N realizations (0 = all)")
        ->capture_default_str();
    be->add_option("--out-dir", be_out,
                   "Output directory (env DRAGONNET_OUT_DIR overrides the default)")
        ->capture_default_str();
    be->add_flag("--save-models", be_save_models, "Write model snapshots under models/");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_generate(gen_n, gen_d, gen_ate, gen_conf, gen_noise, gen_seed, gen_out);
        if (tr->parsed()) {
            if (!dist_opt->empty() && tr_variant != "baseline")
                tr_variant = "mod-" + tr_distance;
            const bool k_set = tr->count("--k") > 0;
            return cmd_train(tr_data, tr_variant, tr_flags, tr_test_frac, tr_snapshot,
                             !dist_opt->empty(), k_set);
        }
        if (be->parsed())
            return cmd_bench(be_dir, be_variants, be_flags, be_test_frac, be_limit,
                             be_out, be_save_models);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
