#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <span>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "spikerate/errors.hpp"
#include "spikerate/estimator.hpp"
#include "spikerate/generators.hpp"
#include "spikerate/io.hpp"
#include "spikerate/oracles.hpp"
#include "spikerate/spike_train.hpp"
#include "spikerate/validation.hpp"

using nlohmann::json;
namespace sr = spikerate;

namespace {

// Exit contract: 0 = pipeline ran (statistical verdicts are results, not errors),
// 2 = configuration/usage error, 3 = malformed input file, 4 = computation failure.
constexpr int exit_usage = 2;
constexpr int exit_input = 3;
constexpr int exit_compute = 4;

json load_config_file(const std::string& path) {
    std::string text;
    try {
        text = sr::io::read_text(path);
    } catch (const sr::Error& e) {
        throw sr::RejectedInput(std::string("config: ") + e.what());
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw sr::RejectedInput("config: " + std::string(e.what()));
    }
}

template <class T>
void from_config(const json& cfg, const std::string& key, T& value) {
    if (!cfg.contains(key)) return;
    try {
        value = cfg.at(key).get<T>();
    } catch (const json::exception& e) {
        throw sr::RejectedInput("config key '" + key + "': " + e.what());
    }
}

struct SeedInfo {
    std::uint64_t value = 0;
    std::string source = "default";
};

// Precedence: --config file, then the flag, then SPIKERATE_SEED, then 0.
SeedInfo resolve_seed(const json& cfg, bool flag_given, std::uint64_t flag_value) {
    if (cfg.contains("seed")) {
        SeedInfo info{0, "config"};
        from_config(cfg, "seed", info.value);
        return info;
    }
    if (flag_given) return {flag_value, "flag"};
    if (const char* env = std::getenv("SPIKERATE_SEED")) {
        const std::string_view sv(env);
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
        if (ec != std::errc{} || ptr != sv.data() + sv.size())
            throw sr::RejectedInput("SPIKERATE_SEED must be an unsigned integer, got '" +
                                    std::string(sv) + "'");
        return {v, "env"};
    }
    return {0, "default"};
}

void write_with_meta(const std::string& path, std::span<const sr::io::Column> columns,
                     const json& meta) {
    sr::io::write_csv(path, columns);
    sr::io::write_text(sr::io::metadata_path(path), meta.dump(2) + "\n");
}

void write_isis(const std::string& path, std::span<const double> isis, const json& meta) {
    std::vector<double> index(isis.size());
    for (std::size_t i = 0; i < index.size(); ++i) index[i] = static_cast<double>(i + 1);
    const sr::io::Column cols[] = {{"index", index}, {"isi", isis}};
    write_with_meta(path, cols, meta);
}

sr::core::SpikeTrain load_train(const std::string& path, const std::string& format) {
    std::string fmt = format;
    if (fmt == "auto") fmt = path.ends_with(".csv") ? "isis" : "spiketimes";
    if (fmt == "spiketimes") return sr::io::read_spike_times(path);
    auto isis = sr::io::read_isis_csv(path);
    return sr::core::to_spike_train(sr::core::IsiSequence(std::move(isis)));
}

void check_format(const std::string& format) {
    if (format != "auto" && format != "spiketimes" && format != "isis")
        throw sr::RejectedInput("--format must be one of auto|spiketimes|isis, got '" +
                                format + "'");
}

std::string transformed_path_for(const std::string& report_path) {
    if (report_path.ends_with(".json"))
        return report_path.substr(0, report_path.size() - 5) + "_transformed.csv";
    return report_path + "_transformed.csv";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conditional firing-rate estimation for spike trains with Markov ISIs"};
    app.require_subcommand(1);
    int phase = exit_usage;

    // ---------- simulate ----------
    auto* simulate = app.add_subcommand("simulate", "Generate synthetic ISI samples");
    simulate->require_subcommand(1);

    struct {
        std::uint64_t n = 1000;
        double rate = 1.0;
        std::uint64_t seed = 0;
        std::string out = "isis.csv";
        std::string config;
    } po;
    auto* poisson = simulate->add_subcommand("poisson", "i.i.d. exponential ISIs");
    poisson->add_option("--n", po.n, "number of ISIs")->capture_default_str();
    poisson->add_option("--rate", po.rate, "exponential rate lambda")->capture_default_str();
    auto* po_seed = poisson->add_option("--seed", po.seed, "RNG seed");
    poisson->add_option("--out", po.out, "output ISI CSV")->capture_default_str();
    poisson->add_option("--config", po.config, "JSON config overriding flags");
    poisson->callback([&] {
        const json cfg = po.config.empty() ? json::object() : load_config_file(po.config);
        from_config(cfg, "n", po.n);
        from_config(cfg, "rate", po.rate);
        from_config(cfg, "out", po.out);
        const SeedInfo seed = resolve_seed(cfg, po_seed->count() > 0, po.seed);
        if (po.n == 0) throw sr::RejectedInput("simulate poisson: --n must be >= 1");
        if (!(po.rate > 0.0))
            throw sr::RejectedInput("simulate poisson: --rate must be > 0");
        phase = exit_compute;
        const auto isi = sr::gen::gen_poisson(po.n, po.rate, seed.value);
        write_isis(po.out, isi.isis(),
                   json{{"subcommand", "simulate poisson"},
                        {"n", po.n},
                        {"rate", po.rate},
                        {"seed", seed.value},
                        {"seed-source", seed.source},
                        {"out", po.out}});
        std::cout << "wrote " << po.n << " ISIs -> " << po.out << '\n';
    });

    struct {
        std::uint64_t n = 1000;
        double rate = 1.0;
        double delta = 0.5;
        double alpha = 0.0;
        std::uint64_t seed = 0;
        std::string out = "isis.csv";
        std::string config;
    } fg;
    auto* fgm = simulate->add_subcommand(
        "fgm", "FGM-copula Markov chain of shifted-exponential ISIs");
    fgm->add_option("--n", fg.n, "number of ISIs")->capture_default_str();
    fgm->add_option("--rate", fg.rate, "exponential rate lambda")->capture_default_str();
    fgm->add_option("--delta", fg.delta, "refractory period delta")->capture_default_str();
    fgm->add_option("--alpha", fg.alpha, "FGM dependence in [-1, 1]")->capture_default_str();
    auto* fg_seed = fgm->add_option("--seed", fg.seed, "RNG seed");
    fgm->add_option("--out", fg.out, "output ISI CSV")->capture_default_str();
    fgm->add_option("--config", fg.config, "JSON config overriding flags");
    fgm->callback([&] {
        const json cfg = fg.config.empty() ? json::object() : load_config_file(fg.config);
        from_config(cfg, "n", fg.n);
        from_config(cfg, "rate", fg.rate);
        from_config(cfg, "delta", fg.delta);
        from_config(cfg, "alpha", fg.alpha);
        from_config(cfg, "out", fg.out);
        const SeedInfo seed = resolve_seed(cfg, fg_seed->count() > 0, fg.seed);
        if (fg.n == 0) throw sr::RejectedInput("simulate fgm: --n must be >= 1");
        if (!(fg.rate > 0.0)) throw sr::RejectedInput("simulate fgm: --rate must be > 0");
        if (!(fg.delta >= 0.0))
            throw sr::RejectedInput("simulate fgm: --delta must be >= 0");
        if (!(std::abs(fg.alpha) <= 1.0))
            throw sr::RejectedInput("simulate fgm: --alpha must lie in [-1, 1]");
        phase = exit_compute;
        const sr::gen::FgmExpParams params{fg.rate, fg.delta, fg.alpha, seed.value};
        const auto isi = sr::gen::gen_fgm_exponential(fg.n, params);
        write_isis(fg.out, isi.isis(),
                   json{{"subcommand", "simulate fgm"},
                        {"n", fg.n},
                        {"rate", fg.rate},
                        {"delta", fg.delta},
                        {"alpha", fg.alpha},
                        {"seed", seed.value},
                        {"seed-source", seed.source},
                        {"out", fg.out}});
        std::cout << "wrote " << fg.n << " ISIs -> " << fg.out << '\n';
    });

    struct {
        double alpha = 0.05;
        double alpha_r = 0.5;
        double mu = 4.0;
        double sigma = 1.0;
        double s = 10.0;
        double dt = 0.01;
        std::uint64_t burn_in = 100;
        std::uint64_t max_steps = 100000000ull;
        std::uint64_t n = 1000;
        std::uint64_t seed = 0;
        std::string out = "isis.csv";
        std::string trajectory;
        std::string config;
    } bc;
    auto* bicomp = simulate->add_subcommand(
        "bicomp", "two-compartment SDE neuron (Euler-Maruyama)");
    bicomp->add_option("--alpha", bc.alpha, "leak rate")->capture_default_str();
    bicomp->add_option("--alpha-r", bc.alpha_r, "compartment coupling")->capture_default_str();
    bicomp->add_option("--mu", bc.mu, "dendritic drift")->capture_default_str();
    bicomp->add_option("--sigma", bc.sigma, "dendritic noise")->capture_default_str();
    bicomp->add_option("--s", bc.s, "somatic threshold")->capture_default_str();
    bicomp->add_option("--dt", bc.dt, "Euler step")->capture_default_str();
    bicomp->add_option("--burn-in", bc.burn_in, "leading ISIs discarded")->capture_default_str();
    bicomp->add_option("--max-steps", bc.max_steps, "step budget")->capture_default_str();
    bicomp->add_option("--n", bc.n, "number of ISIs kept")->capture_default_str();
    auto* bc_seed = bicomp->add_option("--seed", bc.seed, "RNG seed");
    bicomp->add_option("--out", bc.out, "output ISI CSV")->capture_default_str();
    bicomp->add_option("--trajectory", bc.trajectory, "also write (t, x1, x2) CSV");
    bicomp->add_option("--config", bc.config, "JSON config overriding flags");
    bicomp->callback([&] {
        const json cfg = bc.config.empty() ? json::object() : load_config_file(bc.config);
        from_config(cfg, "alpha", bc.alpha);
        from_config(cfg, "alpha-r", bc.alpha_r);
        from_config(cfg, "mu", bc.mu);
        from_config(cfg, "sigma", bc.sigma);
        from_config(cfg, "s", bc.s);
        from_config(cfg, "dt", bc.dt);
        from_config(cfg, "burn-in", bc.burn_in);
        from_config(cfg, "max-steps", bc.max_steps);
        from_config(cfg, "n", bc.n);
        from_config(cfg, "out", bc.out);
        from_config(cfg, "trajectory", bc.trajectory);
        const SeedInfo seed = resolve_seed(cfg, bc_seed->count() > 0, bc.seed);
        if (bc.n == 0) throw sr::RejectedInput("simulate bicomp: --n must be >= 1");
        if (!(bc.alpha > 0.0) || !(bc.alpha_r > 0.0))
            throw sr::RejectedInput("simulate bicomp: --alpha and --alpha-r must be > 0");
        if (!(bc.sigma > 0.0))
            throw sr::RejectedInput("simulate bicomp: --sigma must be > 0");
        if (!(bc.s > 0.0)) throw sr::RejectedInput("simulate bicomp: --s must be > 0");
        if (!(bc.dt > 0.0) || bc.dt > 0.1 / (bc.alpha + 2.0 * bc.alpha_r))
            throw sr::RejectedInput(
                "simulate bicomp: --dt must lie in (0, 0.1/(alpha + 2 alpha-r)]");
        phase = exit_compute;
        const sr::gen::TwoCompartmentParams params{bc.alpha,    bc.alpha_r,  bc.mu,
                                                   bc.sigma,    bc.s,        bc.dt,
                                                   bc.burn_in,  bc.max_steps, seed.value};
        const auto [isi, traj] =
            sr::gen::gen_two_compartment(params, bc.n, !bc.trajectory.empty());
        const json meta{{"subcommand", "simulate bicomp"},
                        {"alpha", bc.alpha},
                        {"alpha-r", bc.alpha_r},
                        {"mu", bc.mu},
                        {"sigma", bc.sigma},
                        {"s", bc.s},
                        {"dt", bc.dt},
                        {"burn-in", bc.burn_in},
                        {"max-steps", bc.max_steps},
                        {"n", bc.n},
                        {"seed", seed.value},
                        {"seed-source", seed.source},
                        {"out", bc.out},
                        {"trajectory", bc.trajectory}};
        write_isis(bc.out, isi.isis(), meta);
        if (traj) {
            const sr::io::Column cols[] = {
                {"t", traj->time}, {"x1", traj->x1}, {"x2", traj->x2}};
            write_with_meta(bc.trajectory, cols, meta);
        }
        std::cout << "wrote " << bc.n << " ISIs -> " << bc.out << '\n';
    });

    // ---------- estimate ----------
    struct {
        std::string input;
        std::string format = "auto";
        double kernel_scale = 0.2;
        double beta = 0.2;
        double survival_floor = 1e-6;
        double eval_step = 0.01;
        double domain_cap = 0.0; // 0 = automatic (99th percentile)
        double grid_step = 0.01;
        std::string oracle;
        double rate = 1.0;
        double delta = 0.5;
        double alpha = 1.0;
        std::string out = "path.csv";
        std::string surface;
        double surface_step = 0.1;
        double surface_t_max = 0.0;   // 0 = domain cap
        double surface_tau_max = 0.0; // 0 = domain cap
        std::string config;
    } es;
    auto* estimate =
        app.add_subcommand("estimate", "Fit the kernel estimator and write the intensity path");
    estimate->add_option("--input", es.input, "spike-time or ISI-CSV file")->required();
    estimate->add_option("--format", es.format, "auto|spiketimes|isis")
        ->capture_default_str();
    estimate->add_option("--kernel-scale", es.kernel_scale, "Gaussian kernel sd s")
        ->capture_default_str();
    estimate->add_option("--beta", es.beta, "bandwidth exponent in (0, 0.25)")
        ->capture_default_str();
    estimate->add_option("--survival-floor", es.survival_floor, "survival clamp epsilon")
        ->capture_default_str();
    estimate->add_option("--eval-step", es.eval_step, "survival-integral step")
        ->capture_default_str();
    estimate->add_option("--domain-cap", es.domain_cap,
                         "hazard domain cap M (0 = sample 99th percentile)")
        ->capture_default_str();
    estimate->add_option("--grid-step", es.grid_step, "path sampling step")
        ->capture_default_str();
    estimate->add_option("--oracle", es.oracle,
                         "overlay closed-form intensity (fgm)");
    estimate->add_option("--rate", es.rate, "oracle rate lambda")->capture_default_str();
    estimate->add_option("--delta", es.delta, "oracle refractory delta")->capture_default_str();
    estimate->add_option("--alpha", es.alpha, "oracle FGM dependence")->capture_default_str();
    estimate->add_option("--out", es.out, "output path CSV")->capture_default_str();
    estimate->add_option("--surface", es.surface, "also write hazard surface CSV");
    estimate->add_option("--surface-step", es.surface_step, "surface grid step")
        ->capture_default_str();
    estimate->add_option("--surface-t-max", es.surface_t_max, "surface t range (0 = cap)")
        ->capture_default_str();
    estimate->add_option("--surface-tau-max", es.surface_tau_max,
                         "surface tau range (0 = cap)")
        ->capture_default_str();
    estimate->add_option("--config", es.config, "JSON config overriding flags");
    estimate->callback([&] {
        const json cfg = es.config.empty() ? json::object() : load_config_file(es.config);
        from_config(cfg, "input", es.input);
        from_config(cfg, "format", es.format);
        from_config(cfg, "kernel-scale", es.kernel_scale);
        from_config(cfg, "beta", es.beta);
        from_config(cfg, "survival-floor", es.survival_floor);
        from_config(cfg, "eval-step", es.eval_step);
        from_config(cfg, "domain-cap", es.domain_cap);
        from_config(cfg, "grid-step", es.grid_step);
        from_config(cfg, "oracle", es.oracle);
        from_config(cfg, "rate", es.rate);
        from_config(cfg, "delta", es.delta);
        from_config(cfg, "alpha", es.alpha);
        from_config(cfg, "out", es.out);
        from_config(cfg, "surface", es.surface);
        from_config(cfg, "surface-step", es.surface_step);
        from_config(cfg, "surface-t-max", es.surface_t_max);
        from_config(cfg, "surface-tau-max", es.surface_tau_max);
        check_format(es.format);
        sr::est::EstimatorConfig ecfg;
        ecfg.kernel_scale = es.kernel_scale;
        ecfg.bandwidth_exponent = es.beta;
        ecfg.survival_floor = es.survival_floor;
        ecfg.eval_step = es.eval_step;
        if (es.domain_cap > 0.0) ecfg.domain_cap = es.domain_cap;
        ecfg.validate();
        if (!(es.grid_step > 0.0))
            throw sr::RejectedInput("estimate: --grid-step must be > 0");
        if (!es.oracle.empty() && es.oracle != "fgm")
            throw sr::RejectedInput("estimate: --oracle must be 'fgm'");
        if (!es.surface.empty() && !(es.surface_step > 0.0))
            throw sr::RejectedInput("estimate: --surface-step must be > 0");
        phase = exit_input;
        const auto train = load_train(es.input, es.format);
        phase = exit_compute;
        const auto isi = sr::core::from_spike_times(train);
        const auto fit = sr::est::FittedEstimator::fit(isi, ecfg);
        const auto path = fit.conditional_intensity_path(train, es.grid_step);
        const auto rows = path.flattened();
        std::vector<double> ts(rows.size()), lambda_hat(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            ts[i] = rows[i].first;
            lambda_hat[i] = rows[i].second;
        }
        json meta{{"subcommand", "estimate"},
                  {"input", es.input},
                  {"format", es.format},
                  {"kernel-scale", es.kernel_scale},
                  {"beta", es.beta},
                  {"survival-floor", es.survival_floor},
                  {"eval-step", es.eval_step},
                  {"domain-cap", fit.domain_cap()},
                  {"grid-step", es.grid_step},
                  {"oracle", es.oracle},
                  {"out", es.out},
                  {"surface", es.surface}};
        if (!es.oracle.empty()) {
            meta["rate"] = es.rate;
            meta["delta"] = es.delta;
            meta["alpha"] = es.alpha;
            const sr::oracle::ExpRefractoryModel model(es.rate, es.delta, es.alpha);
            std::vector<double> lambda_oracle(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i)
                lambda_oracle[i] = model.conditional_intensity(ts[i], train);
            const sr::io::Column cols[] = {
                {"t", ts}, {"lambda_hat", lambda_hat}, {"lambda_oracle", lambda_oracle}};
            write_with_meta(es.out, cols, meta);
        } else {
            const sr::io::Column cols[] = {{"t", ts}, {"lambda_hat", lambda_hat}};
            write_with_meta(es.out, cols, meta);
        }
        if (!es.surface.empty()) {
            const double t_max =
                es.surface_t_max > 0.0 ? es.surface_t_max : fit.domain_cap();
            const double tau_max =
                es.surface_tau_max > 0.0 ? es.surface_tau_max : fit.domain_cap();
            meta["surface-step"] = es.surface_step;
            meta["surface-t-max"] = t_max;
            meta["surface-tau-max"] = tau_max;
            std::vector<double> taus, tss, hs;
            for (double tau = 0.0; tau <= tau_max + 1e-12; tau += es.surface_step) {
                const auto [grid, values] =
                    fit.conditional_hazard_curve(tau, t_max, es.surface_step);
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    taus.push_back(tau);
                    tss.push_back(grid[i]);
                    hs.push_back(values[i]);
                }
            }
            const sr::io::Column cols[] = {{"tau", taus}, {"t", tss}, {"hazard", hs}};
            write_with_meta(es.surface, cols, meta);
        }
        std::cout << "wrote intensity path (" << rows.size() << " nodes) -> " << es.out
                  << '\n';
    });

    // ---------- validate ----------
    struct {
        std::string input;
        std::string format = "auto";
        double kernel_scale = 0.2;
        double beta = 0.2;
        double survival_floor = 1e-6;
        double eval_step = 0.01;
        double domain_cap = 0.0;
        double grid_step = 0.01;
        double level = 0.05;
        int bootstrap = 1000;
        bool serial = false;
        std::uint64_t seed = 0;
        std::string out = "report.json";
        std::string transformed;
        std::string config;
    } va;
    auto* validate = app.add_subcommand(
        "validate", "Time-rescaling goodness-of-fit pipeline (KS, Kendall, copula)");
    validate->add_option("--input", va.input, "spike-time or ISI-CSV file")->required();
    validate->add_option("--format", va.format, "auto|spiketimes|isis")
        ->capture_default_str();
    validate->add_option("--kernel-scale", va.kernel_scale, "Gaussian kernel sd s")
        ->capture_default_str();
    validate->add_option("--beta", va.beta, "bandwidth exponent in (0, 0.25)")
        ->capture_default_str();
    validate->add_option("--survival-floor", va.survival_floor, "survival clamp epsilon")
        ->capture_default_str();
    validate->add_option("--eval-step", va.eval_step, "survival-integral step")
        ->capture_default_str();
    validate->add_option("--domain-cap", va.domain_cap,
                         "hazard domain cap M (0 = sample 99th percentile)")
        ->capture_default_str();
    validate->add_option("--grid-step", va.grid_step, "path sampling step")
        ->capture_default_str();
    validate->add_option("--level", va.level, "test level")->capture_default_str();
    validate->add_option("--bootstrap", va.bootstrap, "copula bootstrap replicates")
        ->capture_default_str();
    validate->add_flag("--serial", va.serial, "disable the parallel bootstrap");
    auto* va_seed = validate->add_option("--seed", va.seed, "bootstrap seed");
    validate->add_option("--out", va.out, "output report JSON")->capture_default_str();
    validate->add_option("--transformed", va.transformed,
                         "transformed-ISI CSV (default: derived from --out)");
    validate->add_option("--config", va.config, "JSON config overriding flags");
    validate->callback([&] {
        const json cfg = va.config.empty() ? json::object() : load_config_file(va.config);
        from_config(cfg, "input", va.input);
        from_config(cfg, "format", va.format);
        from_config(cfg, "kernel-scale", va.kernel_scale);
        from_config(cfg, "beta", va.beta);
        from_config(cfg, "survival-floor", va.survival_floor);
        from_config(cfg, "eval-step", va.eval_step);
        from_config(cfg, "domain-cap", va.domain_cap);
        from_config(cfg, "grid-step", va.grid_step);
        from_config(cfg, "level", va.level);
        from_config(cfg, "bootstrap", va.bootstrap);
        from_config(cfg, "serial", va.serial);
        from_config(cfg, "out", va.out);
        from_config(cfg, "transformed", va.transformed);
        const SeedInfo seed = resolve_seed(cfg, va_seed->count() > 0, va.seed);
        check_format(va.format);
        sr::est::EstimatorConfig ecfg;
        ecfg.kernel_scale = va.kernel_scale;
        ecfg.bandwidth_exponent = va.beta;
        ecfg.survival_floor = va.survival_floor;
        ecfg.eval_step = va.eval_step;
        if (va.domain_cap > 0.0) ecfg.domain_cap = va.domain_cap;
        ecfg.validate();
        if (!(va.grid_step > 0.0))
            throw sr::RejectedInput("validate: --grid-step must be > 0");
        if (!(va.level > 0.0 && va.level < 1.0))
            throw sr::RejectedInput("validate: --level must lie in (0, 1)");
        if (va.bootstrap < 100)
            throw sr::RejectedInput("validate: --bootstrap must be >= 100");
        const std::string transformed =
            va.transformed.empty() ? transformed_path_for(va.out) : va.transformed;
        phase = exit_input;
        const auto train = load_train(va.input, va.format);
        phase = exit_compute;
        const auto isi = sr::core::from_spike_times(train);
        const auto fit = sr::est::FittedEstimator::fit(isi, ecfg);
        sr::val::ValidationConfig vcfg;
        vcfg.level = va.level;
        vcfg.n_bootstrap = va.bootstrap;
        vcfg.seed = seed.value;
        vcfg.grid_step = va.grid_step;
        vcfg.exec = va.serial ? sr::Exec::serial : sr::Exec::parallel;
        const auto report = sr::val::validate(train, fit, vcfg);
        const json config_echo{{"subcommand", "validate"},
                               {"input", va.input},
                               {"format", va.format},
                               {"kernel-scale", va.kernel_scale},
                               {"beta", va.beta},
                               {"survival-floor", va.survival_floor},
                               {"eval-step", va.eval_step},
                               {"domain-cap", fit.domain_cap()},
                               {"grid-step", va.grid_step},
                               {"level", va.level},
                               {"bootstrap", va.bootstrap},
                               {"serial", va.serial},
                               {"seed", seed.value},
                               {"seed-source", seed.source},
                               {"out", va.out},
                               {"transformed", transformed}};
        const auto verdict = [](bool pass) { return pass ? "pass" : "reject"; };
        const json out{
            {"n_rescaled", report.n_rescaled},
            {"rescaled_mean", report.rescaled_mean},
            {"tests",
             {{"uniformity",
               {{"statistic", report.uniformity.statistic},
                {"p_value", report.uniformity.p_value},
                {"verdict", verdict(report.uniformity_pass)}}},
              {"kendall",
               {{"tau", report.kendall.tau},
                {"p_value", report.kendall.p_value},
                {"verdict", verdict(report.kendall_pass)}}},
              {"copula",
               {{"statistic", report.copula.statistic},
                {"p_value", report.copula.p_value},
                {"verdict", verdict(report.copula_pass)}}}}},
            {"config", config_echo}};
        sr::io::write_text(va.out, out.dump(2) + "\n");
        std::vector<double> index(report.rescaled.size());
        for (std::size_t i = 0; i < index.size(); ++i)
            index[i] = static_cast<double>(i + 1);
        const sr::io::Column cols[] = {{"index", index},
                                       {"rescaled", report.rescaled},
                                       {"uniformized", report.uniformized}};
        write_with_meta(transformed, cols, config_echo);
        std::cout << "uniformity p=" << report.uniformity.p_value << " ("
                  << verdict(report.uniformity_pass) << "), kendall p="
                  << report.kendall.p_value << " (" << verdict(report.kendall_pass)
                  << "), copula p=" << report.copula.p_value << " ("
                  << verdict(report.copula_pass) << ") -> " << va.out << '\n';
    });

    // ---------- summary ----------
    struct {
        std::string input;
        std::string format = "auto";
        std::vector<double> count_at;
        std::string out = "summary.json";
        std::string config;
    } su;
    auto* summary =
        app.add_subcommand("summary", "Classical rate statistics and adjacent-pair Kendall");
    summary->add_option("--input", su.input, "spike-time or ISI-CSV file")->required();
    summary->add_option("--format", su.format, "auto|spiketimes|isis")
        ->capture_default_str();
    summary->add_option("--count-at", su.count_at, "times t for N(t)/t");
    summary->add_option("--out", su.out, "output JSON")->capture_default_str();
    summary->add_option("--config", su.config, "JSON config overriding flags");
    summary->callback([&] {
        const json cfg = su.config.empty() ? json::object() : load_config_file(su.config);
        from_config(cfg, "input", su.input);
        from_config(cfg, "format", su.format);
        from_config(cfg, "count-at", su.count_at);
        from_config(cfg, "out", su.out);
        check_format(su.format);
        phase = exit_input;
        const auto train = load_train(su.input, su.format);
        phase = exit_compute;
        const auto isi = sr::core::from_spike_times(train);
        const sr::core::CountingView counting(train);
        json count_rates = json::array();
        for (double t : su.count_at)
            count_rates.push_back(json{{"t", t}, {"rate", counting.count_rate(t)}});
        const auto kendall = sr::val::kendall_adjacent(isi.isis());
        const json out{{"n_isis", isi.size()},
                       {"mean_rate", sr::core::mean_rate(isi)},
                       {"instantaneous_mean_rate", sr::core::instantaneous_mean_rate(isi)},
                       {"count_rate", count_rates},
                       {"kendall", {{"tau", kendall.tau}, {"p_value", kendall.p_value}}},
                       {"config",
                        {{"subcommand", "summary"},
                         {"input", su.input},
                         {"format", su.format},
                         {"count-at", su.count_at},
                         {"out", su.out}}}};
        sr::io::write_text(su.out, out.dump(2) + "\n");
        std::cout << "wrote summary -> " << su.out << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return exit_usage;
    } catch (const sr::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const sr::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return phase;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_compute;
    }
    return 0;
}
