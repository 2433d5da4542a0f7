#include "fiberdd/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace fiberdd {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string key) {
    key = trim(key);
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    std::replace(key.begin(), key.end(), '-', '_');
    return key;
}

double parse_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    const std::string t = trim(value);
    const char* first = t.data();
    if (!t.empty() && t.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw UsageError(key + ": expected a number, got '" + value + "'");
    return v;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& value) {
    Int v = 0;
    const std::string t = trim(value);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw UsageError(key + ": expected an integer, got '" + value + "'");
    return v;
}

bool is_unset(const std::string& value) {
    const auto t = trim(value);
    return t == "none" || t == "unset" || t.empty();
}

std::string sequence_name(SequenceKind k) {
    switch (k) {
        case SequenceKind::free: return "free";
        case SequenceKind::spin_echo: return "se";
        case SequenceKind::cpmg: return "cpmg";
    }
    return "?";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    os << content;
    os.flush();
    if (!os) throw IoError("failed writing '" + path.string() + "'");
}

void write_point_fields(std::ostream& os, const CurvePoint& p) {
    os << format_number(p.length) << ',' << format_number(p.f_length) << ','
       << format_number(p.gamma) << ',' << format_number(p.concurrence);
}

}  // namespace

std::string format_number(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    if (ec != std::errc()) return "nan";
    return {buf, ptr};
}

std::string format_shortest(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) return "nan";
    return {buf, ptr};
}

PulseSequence SimulationConfig::pulse_sequence() const {
    switch (sequence) {
        case SequenceKind::free: return PulseSequence::free();
        case SequenceKind::spin_echo: return PulseSequence::spin_echo();
        case SequenceKind::cpmg:
            if (pulses) return PulseSequence::cpmg(*pulses);
            return PulseSequence::cpmg_density(density.value_or(kDefaultDensity));
    }
    return PulseSequence::free();
}

TwoQubitXState SimulationConfig::initial_state() const {
    if (state == "reference") return TwoQubitXState::reference_mixed();
    if (state == "bell") return TwoQubitXState::bell_phi_plus();
    if (state.rfind("werner:", 0) == 0) {
        const double p = parse_double("state", state.substr(7));
        if (!(p >= 0.0 && p <= 1.0)) throw UsageError("state: werner parameter must lie in [0, 1]");
        return TwoQubitXState::werner(p);
    }
    if (state.rfind("file:", 0) == 0) {
        const std::string path = state.substr(5);
        std::ifstream in(path);
        if (!in) throw IoError("cannot open state file '" + path + "'");
        try {
            return parse_xstate(in);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    throw UsageError("state: expected reference, bell, werner:p or file:PATH, got '" + state + "'");
}

std::vector<std::string> SimulationConfig::validation_report() const {
    std::vector<std::string> report;
    auto check = [&](auto&& fn) {
        try {
            fn();
        } catch (const IoError&) {
            throw;
        } catch (const std::exception& e) {
            report.emplace_back(e.what());
        }
    };
    if (sequence != SequenceKind::cpmg && (pulses || density))
        report.emplace_back("pulses/density: only valid with sequence = cpmg");
    if (pulses && density) report.emplace_back("pulses/density: give one of them, not both");
    check([&] { (void)pulse_sequence(); });
    check([&] { noise.validate(); });
    check([&] { profile.validate(); });
    check([&] { (void)initial_state(); });
    check([&] {
        const auto violations = validate_state(initial_state());
        for (const auto& v : violations)
            report.push_back("state: " + v.check + " violated by " + format_number(v.margin));
    });
    if (!(length_max > 0.0) || !std::isfinite(length_max)) report.emplace_back("length_max: must be > 0");
    if (grid_points < 1) report.emplace_back("grid_points: must be >= 1");
    if (max_pulses < 0) report.emplace_back("max_pulses: must be >= 0");
    if (!(mc_length > 0.0) || !std::isfinite(mc_length)) report.emplace_back("mc_length: must be > 0");
    if (mc.trials < 1) report.emplace_back("trials: must be >= 1");
    if (mc.resolution < 1) report.emplace_back("resolution: must be >= 1");
    if (mc.frequency_modes < 1) report.emplace_back("modes: must be >= 1");
    return report;
}

void SimulationConfig::validate() const {
    const auto report = validation_report();
    if (report.empty()) return;
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto& line : report) os << "\n  " << line;
    throw UsageError(os.str());
}

std::vector<std::pair<std::string, std::string>> SimulationConfig::resolved() const {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("sequence", sequence_name(sequence));
    kv.emplace_back("pulses", pulses ? std::to_string(*pulses) : "none");
    const bool uses_density = sequence == SequenceKind::cpmg && !pulses;
    kv.emplace_back("density", uses_density ? format_shortest(density.value_or(kDefaultDensity))
                                            : (density ? format_shortest(*density) : "none"));
    kv.emplace_back("alpha", format_shortest(noise.exponent));
    kv.emplace_back("noise_amp", format_shortest(noise.amplitude));
    kv.emplace_back("ir_cutoff", format_shortest(noise.ir_cutoff));
    kv.emplace_back("uv_cutoff", format_shortest(noise.uv_cutoff));
    kv.emplace_back("omega0", format_shortest(profile.omega0));
    kv.emplace_back("sigma", format_shortest(profile.sigma));
    kv.emplace_back("state", state);
    kv.emplace_back("length_max", format_shortest(length_max));
    kv.emplace_back("grid_points", std::to_string(grid_points));
    kv.emplace_back("max_pulses", std::to_string(max_pulses));
    kv.emplace_back("mc_length", format_shortest(mc_length));
    kv.emplace_back("trials", std::to_string(mc.trials));
    kv.emplace_back("seed", std::to_string(mc.seed));
    kv.emplace_back("resolution", std::to_string(mc.resolution));
    kv.emplace_back("modes", std::to_string(mc.frequency_modes));
    kv.emplace_back("out", out.empty() ? "default" : out);
    return kv;
}

void apply_setting(SimulationConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
    const std::string key = normalize_key(raw_key);
    const std::string value = trim(raw_value);
    if (key == "sequence") {
        if (value == "free") cfg.sequence = SequenceKind::free;
        else if (value == "se") cfg.sequence = SequenceKind::spin_echo;
        else if (value == "cpmg") cfg.sequence = SequenceKind::cpmg;
        else throw UsageError("sequence: expected free, se or cpmg, got '" + value + "'");
    } else if (key == "pulses") {
        cfg.pulses = is_unset(value) ? std::nullopt : std::optional<int>(parse_int<int>(key, value));
    } else if (key == "density") {
        cfg.density = is_unset(value) ? std::nullopt : std::optional<double>(parse_double(key, value));
    } else if (key == "alpha") {
        cfg.noise.exponent = parse_double(key, value);
    } else if (key == "noise_amp") {
        cfg.noise.amplitude = parse_double(key, value);
    } else if (key == "ir_cutoff") {
        cfg.noise.ir_cutoff = parse_double(key, value);
    } else if (key == "uv_cutoff") {
        cfg.noise.uv_cutoff = parse_double(key, value);
    } else if (key == "omega0") {
        cfg.profile.omega0 = parse_double(key, value);
    } else if (key == "sigma") {
        cfg.profile.sigma = parse_double(key, value);
    } else if (key == "state") {
        if (value.empty()) throw UsageError("state: empty value");
        cfg.state = value;
    } else if (key == "length_max") {
        cfg.length_max = parse_double(key, value);
    } else if (key == "grid_points") {
        cfg.grid_points = parse_int<int>(key, value);
    } else if (key == "max_pulses") {
        cfg.max_pulses = parse_int<int>(key, value);
    } else if (key == "mc_length") {
        cfg.mc_length = parse_double(key, value);
    } else if (key == "trials") {
        cfg.mc.trials = parse_int<int>(key, value);
    } else if (key == "seed") {
        cfg.mc.seed = parse_int<std::uint64_t>(key, value);
    } else if (key == "resolution") {
        cfg.mc.resolution = parse_int<int>(key, value);
    } else if (key == "modes") {
        cfg.mc.frequency_modes = parse_int<int>(key, value);
    } else if (key == "out") {
        cfg.out = value == "default" ? std::string() : value;
    } else {
        throw UsageError("unknown setting '" + raw_key + "'");
    }
}

void apply_config_stream(SimulationConfig& cfg, std::istream& in, const std::string& origin) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line.substr(0, line.find('#')));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string where = origin + ":" + std::to_string(line_no) + ": ";
        if (eq == std::string::npos) throw UsageError(where + "expected 'key = value'");
        try {
            apply_setting(cfg, body.substr(0, eq), body.substr(eq + 1));
        } catch (const UsageError& e) {
            throw UsageError(where + e.what());
        }
    }
}

void apply_config_file(SimulationConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path.string() + "'");
    apply_config_stream(cfg, in, path.string());
}

void print_resolved(const SimulationConfig& cfg, std::ostream& os) {
    for (const auto& [k, v] : cfg.resolved()) os << "# " << k << " = " << v << '\n';
}

void write_curve_csv(std::ostream& os, const DecoherenceCurve& curve) {
    os << "L,f_L,gamma,concurrence\n";
    for (const auto& p : curve.points) {
        write_point_fields(os, p);
        os << '\n';
    }
}

SimulateOutcome run_simulate(const SimulationConfig& cfg) {
    cfg.validate();
    const auto seq = cfg.pulse_sequence();
    const auto state = cfg.initial_state();
    SimulateOutcome out;
    out.curve = decoherence_curve(seq, cfg.noise, cfg.profile, uniform_grid(cfg.length_max, cfg.grid_points), state);

    std::ostringstream csv;
    write_curve_csv(csv, out.curve);
    write_text_file(cfg.out.empty() ? "curve.csv" : cfg.out, csv.str());

    out.esd = esd_length(seq, cfg.noise, cfg.profile, state, cfg.length_max);
    std::ostringstream summary;
    summary << "esd_length=" << (out.esd ? format_number(*out.esd) : "none")
            << " final_concurrence="
            << format_number(out.curve.points.empty() ? concurrence(state) : out.curve.points.back().concurrence)
            << " flagged_points=" << out.curve.count(PointStatus::flagged)
            << " failed_points=" << out.curve.count(PointStatus::failed);
    out.summary = summary.str();
    return out;
}

FigurePreset parse_figure(const std::string& name) {
    if (name == "fig2a") return FigurePreset::fig2a;
    if (name == "fig2b") return FigurePreset::fig2b;
    if (name == "fig3") return FigurePreset::fig3;
    if (name == "fig4") return FigurePreset::fig4;
    throw UsageError("figure: expected fig2a, fig2b, fig3 or fig4, got '" + name + "'");
}

std::string to_string(FigurePreset preset) {
    switch (preset) {
        case FigurePreset::fig2a: return "fig2a";
        case FigurePreset::fig2b: return "fig2b";
        case FigurePreset::fig3: return "fig3";
        case FigurePreset::fig4: return "fig4";
    }
    return "?";
}

FigureData compute_figure(FigurePreset preset, const SimulationConfig& cfg) {
    cfg.validate();
    const auto state = cfg.initial_state();
    const auto grid = uniform_grid(cfg.length_max, cfg.grid_points);
    FigureData fig{preset, {}, {}};
    fig.header_notes.push_back("preset = " + to_string(preset));

    auto sweep = [&](const std::string& name, const PulseSequence& seq, const NoiseSpectrum& noise) {
        fig.series.push_back({name, decoherence_curve(seq, noise, cfg.profile, grid, state)});
    };

    switch (preset) {
        case FigurePreset::fig2a: {
            fig.header_notes.push_back("series = free evolution and CPMG at fixed pulse densities (pulses per unit length)");
            sweep("free", PulseSequence::free(), cfg.noise);
            for (double n : kFig2aDensities) {
                const auto seq = PulseSequence::cpmg_density(n);
                sweep(seq.label(), seq, cfg.noise);
            }
            break;
        }
        case FigurePreset::fig2b: {
            fig.header_notes.push_back("series = one spin-echo pulse at the midpoint of each measured length, and free evolution");
            sweep("se", PulseSequence::spin_echo(), cfg.noise);
            sweep("free", PulseSequence::free(), cfg.noise);
            break;
        }
        case FigurePreset::fig3: {
            fig.header_notes.push_back("length = " + format_number(kFig3Length));
            fig.header_notes.push_back("series = CPMG with N = 0.." + std::to_string(cfg.max_pulses) +
                                       " pulses over the whole length (N = 0 is free evolution)");
            FigureSeries s{"pulse_scan", {}};
            for (int n = 0; n <= cfg.max_pulses; ++n)
                s.curve.points.push_back(
                    evaluate_point(sequence_for_count(n), cfg.noise, cfg.profile, kFig3Length, state));
            fig.series.push_back(std::move(s));
            break;
        }
        case FigurePreset::fig4: {
            const auto seq = PulseSequence::cpmg_density(kFig2aDensities[1]);
            fig.header_notes.push_back("sequence = " + seq.label() +
                                       " (fixed for all exponents; the middle fig2a density)");
            for (double a : kFig4Exponents) {
                NoiseSpectrum noise = cfg.noise;
                noise.exponent = a;
                sweep("alpha=" + format_number(a), seq, noise);
            }
            break;
        }
    }
    for (const auto& [k, v] : cfg.resolved()) fig.header_notes.push_back(k + " = " + v);
    return fig;
}

void write_figure_csv(std::ostream& os, const FigureData& fig) {
    for (const auto& note : fig.header_notes) os << "# " << note << '\n';
    const bool with_pulses = fig.preset == FigurePreset::fig3;
    os << (with_pulses ? "series,pulses,L,f_L,gamma,concurrence\n" : "series,L,f_L,gamma,concurrence\n");
    for (const auto& s : fig.series) {
        for (const auto& p : s.curve.points) {
            os << s.name << ',';
            if (with_pulses) os << p.pulses << ',';
            write_point_fields(os, p);
            os << '\n';
        }
    }
}

std::filesystem::path run_figure(FigurePreset preset, const SimulationConfig& cfg,
                                 const std::filesystem::path& out_dir) {
    const auto fig = compute_figure(preset, cfg);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create directory '" + out_dir.string() + "': " + ec.message());
    std::ostringstream csv;
    write_figure_csv(csv, fig);
    const auto path = out_dir / (to_string(preset) + ".csv");
    write_text_file(path, csv.str());
    return path;
}

McCheckReport run_mc_check(const SimulationConfig& cfg) {
    cfg.validate();
    const auto seq = cfg.pulse_sequence();
    McCheckReport rep;
    rep.length = cfg.mc_length;
    try {
        validate_mc(cfg.mc, pulse_positions(seq, cfg.mc_length), cfg.mc_length);
    } catch (const std::exception& e) {
        throw UsageError(std::string("mc-check: ") + e.what());
    }
    const auto f = overlap_integral(seq, cfg.noise, cfg.mc_length);
    rep.analytic_gamma = coherence_factor(f.value, cfg.profile);
    rep.mc = mc_coherence(seq, cfg.noise, cfg.profile, cfg.mc_length, cfg.mc);
    const double diff = rep.mc.estimate - rep.analytic_gamma;
    if (rep.mc.std_error > 0.0)
        rep.z_score = diff / rep.mc.std_error;
    else
        rep.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    rep.passed = std::abs(rep.z_score) <= 4.0;

    std::ostringstream os;
    os << "sequence = " << seq.label() << '\n'
       << "length = " << format_number(rep.length) << '\n'
       << "f_L = " << format_number(f.value) << '\n'
       << "analytic_gamma = " << format_number(rep.analytic_gamma) << '\n'
       << "mc_estimate = " << format_number(rep.mc.estimate) << '\n'
       << "std_error = " << format_number(rep.mc.std_error) << '\n'
       << "z_score = " << format_number(rep.z_score) << '\n'
       << "imag_mean = " << format_number(rep.mc.imag_mean) << '\n'
       << "imag_std_error = " << format_number(rep.mc.imag_std_error) << '\n'
       << "trials = " << rep.mc.trials << '\n'
       << "result = " << (rep.passed ? "pass" : "fail") << '\n';
    rep.text = os.str();
    return rep;
}

}  // namespace fiberdd
