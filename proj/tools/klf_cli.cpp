#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <klf/cusps.hpp>
#include <klf/eisenstein.hpp>
#include <klf/fermat.hpp>
#include <klf/parallel.hpp>
#include <klf/qseries.hpp>
#include <klf/scattering.hpp>
#include <klf/verify.hpp>

using namespace klf;

namespace {

constexpr const char* schema_version = "1.0";

/** @brief Usage error raised after parsing: bad values, bad combinations. */
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/** @brief Numeric check failure that still produced a record. */
struct CheckFailure {
    ojson record;
};

struct Settings {
    int n = 0;
    std::string group = "auto";
    std::string cusp = "inf";
    std::string chart = "inf";
    std::string z = "0+1i";
    std::string s = "2";
    long cmax = 500;
    int mmax = 10;
    int order = 20;
    double tol = 0;
    std::string format = "json";
    std::string suite = "fast";
    std::vector<int> ns{1, 2, 3};
    std::vector<std::string> checks;
    std::string p, q;
    std::string label = "theta2";
    bool limit = false;
    unsigned workers = 0;
    bool no_timestamp = false;
    std::string config;
    PrecisionConfig precision{};
};

/** @brief Parses "x+yi", "x-yi", "yi", "x", "i" with decimal literals. */
cplx parse_complex(const std::string& text)
{
    static const std::regex full(R"(^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(?:([+-])((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?i)?$)");
    static const std::regex imag_only(R"(^([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?i$)");
    std::smatch m;
    std::string t;
    for (char c : text)
        if (c != ' ') t += c;
    if (t.empty()) throw UsageError("empty complex literal");
    if (std::regex_match(t, m, imag_only)) {
        const double y = m[2].matched ? std::stod(m[2].str()) : 1.0;
        return {0.0, m[1].str() == "-" ? -y : y};
    }
    if (std::regex_match(t, m, full) && m[1].matched) {
        const double x = std::stod(m[1].str());
        if (!m[2].matched) return {x, 0.0};
        const double y = m[3].matched ? std::stod(m[3].str()) : 1.0;
        return {x, m[2].str() == "-" ? -y : y};
    }
    throw UsageError("cannot parse complex literal '" + text + "' (expected x+yi)");
}

ojson complex_json(cplx v) { return ojson::array({v.real(), v.imag()}); }

ojson int_json(const BigInt& v)
{
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(v);
    return v.str();
}

ojson matrix_json(const Mat2Z& m) { return ojson::array({ojson::array({int_json(m.a), int_json(m.b)}), ojson::array({int_json(m.c), int_json(m.d)})}); }

std::string csv_field(const std::string& f)
{
    if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

/** @brief Shortest round-trip decimal, as in the JSON output. */
std::string number_text(double v) { return ojson(v).dump(); }

std::string csv_row(const std::vector<std::string>& fields)
{
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_field(fields[i]);
    }
    return out + "\r\n";
}

GroupId resolve_group(const Settings& st, bool n_given)
{
    if (st.group == "gamma1") return GroupId::gamma1();
    if (st.group == "gamma2") return GroupId::gamma2();
    if (st.group == "fermat" || (st.group == "auto" && n_given)) {
        if (st.n < 1) throw UsageError("--n must be a positive level");
        return GroupId::gamma_n(st.n);
    }
    return GroupId::gamma2();
}

int require_level(const Settings& st, bool given)
{
    if (!given) throw UsageError("--n is required");
    if (st.n < 1) throw UsageError("--n must be a positive level");
    return st.n;
}

TruncationSpec truncation(const Settings& st)
{
    TruncationSpec t;
    t.c_max = st.cmax;
    t.m_max = st.mmax;
    t.order = st.order;
    t.tol = st.tol;
    t.validate();
    return t;
}

std::string timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

ojson provenance(const Settings& st)
{
    ojson p;
    p["truncation"] = ojson{{"c_max", st.cmax}, {"m_max", st.mmax}, {"order", st.order}, {"tol", st.tol}};
    p["precision"] = ojson{{"target_abs_tol", st.precision.target_abs_tol},
                           {"euler_maclaurin_terms", st.precision.euler_maclaurin_terms},
                           {"bessel_quadrature_nodes", st.precision.bessel_quadrature_nodes}};
    p["workers"] = st.workers;
    if (!st.no_timestamp) p["timestamp"] = timestamp();
    return p;
}

ojson record(const std::string& command, ojson inputs, ojson results, const Settings& st)
{
    ojson r;
    r["schema_version"] = schema_version;
    r["command"] = command;
    r["inputs"] = std::move(inputs);
    r["results"] = std::move(results);
    r["provenance"] = provenance(st);
    return r;
}

ojson ramification_json(const FermatCusp& fc)
{
    const RamPoint rp = ramification_point(fc);
    return ojson{{"point", rp.to_string()}, {"beta_image", to_string(rp.beta_image())}};
}

// ---------------------------------------------------------------------------
// commands

std::string cmd_cusps(const Settings& st, bool n_given)
{
    const int n = require_level(st, n_given);
    const GroupId g = GroupId::gamma_n(n);
    const auto cusps = group_cusps(g);
    if (st.format == "csv") {
        std::string out = csv_row({"position", "representative", "kind", "index", "width", "base", "ramification_point"});
        for (const auto& c : cusps)
            out += csv_row({std::to_string(c.position), c.label, to_string(c.fermat.kind), std::to_string(c.fermat.index),
                            std::to_string(c.width), to_string(c.base), ramification_point(c.fermat).to_string()});
        return out;
    }
    ojson list = ojson::array();
    for (const auto& c : cusps)
        list.push_back(ojson{{"position", c.position},
                             {"representative", c.label},
                             {"rep", ojson::array({c.rep.p, c.rep.q})},
                             {"kind", to_string(c.fermat.kind)},
                             {"index", c.fermat.index},
                             {"width", c.width},
                             {"base", to_string(c.base)},
                             {"ramification", ramification_json(c.fermat)}});
    return record("cusps", ojson{{"n", n}}, ojson{{"group", g.name()}, {"count", cusps.size()}, {"cusps", list}}, st).dump(2);
}

std::string cmd_classify(const Settings& st, bool n_given)
{
    const int n = require_level(st, n_given);
    if (st.p.empty() || st.q.empty()) throw UsageError("--p and --q are required");
    BigInt p, q;
    try {
        p = BigInt(st.p);
        q = BigInt(st.q);
    } catch (const std::exception&) {
        throw UsageError("--p and --q must be integers");
    }
    if (detail::gcd(p, q) != 1) throw UsageError("p and q must be coprime");
    const CuspZ c = make_cusp<BigInt>(p, q);
    const auto cl = classify_cusp(c, n);
    const auto word = decompose_gamma2(cl.witness);
    const CuspZ rep = cl.cusp.rep.cast<BigInt>();
    const bool member = is_in_gamma_n(cl.witness, n);
    const bool maps = mobius_apply(cl.witness, rep) == c;
    ojson res{{"cusp", to_string(c)},
              {"class", ojson{{"position", cusp_position(cl.cusp)},
                              {"representative", to_string(cl.cusp.rep)},
                              {"kind", to_string(cl.cusp.kind)},
                              {"index", cl.cusp.index},
                              {"base", to_string(cl.cusp.base())}}},
              {"witness", ojson{{"matrix", matrix_json(cl.witness)},
                                {"word", to_string(word)},
                                {"in_gamma_n", member},
                                {"maps_representative", maps}}}};
    return record("classify", ojson{{"p", st.p}, {"q", st.q}, {"n", n}}, res, st).dump(2);
}

std::string cmd_scatter(const Settings& st, bool n_given)
{
    const int n = require_level(st, n_given);
    const auto m = scattering_matrix(n, st.precision);
    const auto reps = cusp_reps(n);
    std::vector<std::string> labels;
    for (const auto& r : reps) labels.push_back(to_string(r.rep));
    if (st.format == "csv") {
        std::vector<std::string> head{"convention", "cusp"};
        head.insert(head.end(), labels.begin(), labels.end());
        std::string out = csv_row(head);
        for (const char* conv : {"normalized", "natural"})
            for (std::size_t a = 0; a < m.size(); ++a) {
                std::vector<std::string> row{conv, labels[a]};
                for (const auto& e : m[a]) row.push_back(number_text(std::string(conv) == "normalized" ? e.normalized : e.natural));
                out += csv_row(row);
            }
        return out;
    }
    ojson norm = ojson::array(), nat = ojson::array(), tags = ojson::array();
    for (const auto& row : m) {
        ojson a = ojson::array(), b = ojson::array(), c = ojson::array();
        for (const auto& e : row) {
            a.push_back(e.normalized);
            b.push_back(e.natural);
            c.push_back(e.case_tag);
        }
        norm.push_back(a);
        nat.push_back(b);
        tags.push_back(c);
    }
    ojson res{{"group", GroupId::gamma_n(n).name()},
              {"cusps", labels},
              {"normalized", norm},
              {"natural", nat},
              {"case", tags},
              {"klf_constant", klf_constant(GroupId::gamma_n(n), st.precision)}};
    return record("scatter", ojson{{"n", n}}, res, st).dump(2);
}

std::string cmd_eisenstein(const Settings& st, bool n_given)
{
    const GroupId g = resolve_group(st, n_given);
    const TruncationSpec t = truncation(st);
    const cplx z = parse_complex(st.z);
    if (!(z.imag() > 0)) throw UsageError("z must lie in the upper half plane");
    const int j = find_cusp(g, st.cusp), k = find_cusp(g, st.chart);
    const auto cusps = group_cusps(g);
    ojson inputs{{"group", g.name()}, {"cusp", cusps[j].label}, {"chart", cusps[k].label}, {"z", complex_json(z)}};
    if (st.limit) {
        const PhiSeries ph = phi_series(g, j, k, cplx(1, 0), t, false);
        double tail = 0;
        for (const auto& term : ph.terms) tail = std::max(tail, term.tail_estimate);
        ojson res{{"limit", fourier_limit_eval(ph, z, st.precision)},
                  {"scale", "4pi"},
                  {"natural_constant", natural_constant(g, j, k, st.precision)},
                  {"klf_constant", klf_constant(g, st.precision)},
                  {"coefficient_tail_estimate", tail}};
        inputs["s"] = complex_json(1.0);
        inputs["limit"] = true;
        return record("eisenstein", inputs, res, st).dump(2);
    }
    const cplx s = parse_complex(st.s);
    inputs["s"] = complex_json(s);
    if (!(s.real() > 1)) throw DivergentRegion("Re s must exceed 1 (use --limit for the s = 1 limit)");
    const DirectValue d = eisenstein_direct(g, j, z, s, t, cusps[k].scaling);
    const PhiSeries ph = phi_series(g, j, k, s, t, true);
    const cplx f = fourier_eval(ph, z, st.precision);
    double tail = 0;
    for (const auto& term : ph.terms) tail = std::max(tail, term.tail_estimate);
    ojson res{{"direct", ojson{{"value", complex_json(d.value)}, {"tail_estimate", d.tail_estimate}, {"pairs", d.pairs}}},
              {"fourier", ojson{{"value", complex_json(f)}, {"coefficient_tail_estimate", tail}, {"modes", ph.m_max}}},
              {"difference", std::abs(f - d.value)}};
    return record("eisenstein", inputs, res, st).dump(2);
}

std::string cmd_verify(const Settings& st, const std::vector<std::string>& overrides)
{
    SuiteOptions opt;
    opt.ns = st.ns;
    for (int n : opt.ns)
        if (n < 1) throw UsageError("--n entries must be positive");
    opt.tol = st.tol;
    opt.only = st.checks;
    opt.record_runtime = !st.no_timestamp;
    opt.precision = st.precision;
    for (const auto& o : overrides) {
        if (o == "cmax") opt.c_max = st.cmax;
        if (o == "mmax") opt.m_max = st.mmax;
    }
    SuiteLevel level;
    if (st.suite == "fast") level = SuiteLevel::Fast;
    else if (st.suite == "full") level = SuiteLevel::Full;
    else throw UsageError("--suite must be fast or full");
    const auto reports = run_suite(level, opt);
    ojson list = ojson::array();
    std::size_t failed = 0;
    for (const auto& r : reports) {
        list.push_back(to_json(r));
        failed += !r.passed;
    }
    ojson res{{"suite", st.suite},
              {"total", reports.size()},
              {"failed", failed},
              {"all_passed", failed == 0},
              {"reports", list}};
    ojson inputs{{"suite", st.suite}, {"n", st.ns}, {"checks", st.checks}, {"tol_override", st.tol}};
    const ojson out = record("verify", inputs, res, st);
    if (failed) throw CheckFailure{out};
    return out.dump(2);
}

std::string cmd_qexp(const Settings& st)
{
    const FormLabel label = FormLabel::parse(st.label);
    const QExpansion f = to_double(expansion<cplx_hp>(label, st.order));
    const std::string text = dump(f);
    if (st.format == "text") return text;
    ojson res{{"label", label.name()},
              {"weight", label.weight()},
              {"denominator", f.D},
              {"order", st.order},
              {"lo", f.lo},
              {"hi", f.hi},
              {"dump", text}};
    return record("qexp", ojson{{"label", st.label}, {"order", st.order}}, res, st).dump(2);
}

// ---------------------------------------------------------------------------

/** @brief Exit code of a library error: 1 for rejected input, 2 for unsound truncation, 3 otherwise. */
int error_code(const Error& e)
{
    if (dynamic_cast<const TruncationUnsound*>(&e)) return 2;
    if (dynamic_cast<const InvalidArgument*>(&e) || dynamic_cast<const LevelMismatch*>(&e) ||
        dynamic_cast<const DivergentRegion*>(&e) || dynamic_cast<const OrderTooSmall*>(&e) ||
        dynamic_cast<const ConvergenceRegion*>(&e) || dynamic_cast<const NonPositiveArgument*>(&e) ||
        dynamic_cast<const PoleAtOne*>(&e))
        return 1;
    return 3;
}

/** @brief Applies config-file values to every option the command line left unset. */
void apply_config(CLI::App& app, Settings& st)
{
    if (st.config.empty()) return;
    std::ifstream in(st.config);
    if (!in) throw UsageError("cannot open config file " + st.config);
    ojson cfg;
    try {
        cfg = ojson::parse(in);
    } catch (const std::exception& e) {
        throw UsageError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
    auto unset = [&](const std::string& flag) {
        for (CLI::App* sub : app.get_subcommands())
            if (sub->get_option_no_throw("--" + flag) && sub->count("--" + flag) > 0) return false;
        return true;
    };
    try {
        for (const auto& [key, value] : cfg.items()) {
            if (key == "precision") {
                for (const auto& [pk, pv] : value.items()) {
                    if (pk == "target_abs_tol") st.precision.target_abs_tol = pv.get<double>();
                    else if (pk == "euler_maclaurin_terms") st.precision.euler_maclaurin_terms = pv.get<int>();
                    else if (pk == "bessel_quadrature_nodes") st.precision.bessel_quadrature_nodes = pv.get<int>();
                    else throw UsageError("unknown precision key " + pk);
                }
                continue;
            }
            if (!unset(key)) continue;
            if (key == "n") {
                if (value.is_array()) st.ns = value.get<std::vector<int>>();
                else st.n = value.get<int>();
            } else if (key == "cmax") st.cmax = value.get<long>();
            else if (key == "mmax") st.mmax = value.get<int>();
            else if (key == "order") st.order = value.get<int>();
            else if (key == "tol") st.tol = value.get<double>();
            else if (key == "z") st.z = value.get<std::string>();
            else if (key == "s") st.s = value.get<std::string>();
            else if (key == "workers") st.workers = value.get<unsigned>();
            else if (key == "format") st.format = value.get<std::string>();
            else if (key == "suite") st.suite = value.get<std::string>();
            else throw UsageError("unknown config key " + key);
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("bad config value: ") + e.what());
    }
    st.precision.validate();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Eisenstein series, scattering constants and Kronecker limit formulas for Fermat curve groups"};
    app.require_subcommand(1);
    app.fallthrough();
    Settings st;
    std::string n_text;

    app.add_option("--config", st.config, "JSON file with default option values");
    app.add_option("--workers", st.workers, "worker threads (0 = hardware count)");
    app.add_flag("--no-timestamp", st.no_timestamp, "omit timestamps and runtimes for reproducible output");

    auto* cusps = app.add_subcommand("cusps", "cusp representatives of Gamma_N");
    auto* classify = app.add_subcommand("classify", "Gamma_N-class of a cusp with a witness");
    auto* scatter = app.add_subcommand("scatter", "scattering constants of Gamma_N at s = 1");
    auto* eis = app.add_subcommand("eisenstein", "Eisenstein series by lattice sum and Fourier expansion");
    auto* verify = app.add_subcommand("verify", "run the verification suite");
    auto* qexp = app.add_subcommand("qexp", "q-expansion at infinity");

    for (auto* sub : {cusps, classify, scatter, eis}) sub->add_option("--n", st.n, "level N of Gamma_N");
    verify->add_option("--n", n_text, "comma-separated levels");
    for (auto* sub : {cusps, scatter}) sub->add_option("--format", st.format, "json or csv");
    classify->add_option("--p", st.p, "numerator");
    classify->add_option("--q", st.q, "denominator");
    eis->add_option("--group", st.group, "gamma1, gamma2 or fermat (default: fermat when --n is given)");
    eis->add_option("--cusp", st.cusp, "cusp of the series: p/q, p or inf");
    eis->add_option("--chart", st.chart, "cusp of the Fourier expansion");
    eis->add_option("--z", st.z, "point x+yi");
    eis->add_option("--s", st.s, "parameter s (x+yi)");
    eis->add_flag("--limit", st.limit, "regularized limit at s = 1");
    for (auto* sub : {eis, verify}) {
        sub->add_option("--cmax", st.cmax, "largest lower-left entry c");
        sub->add_option("--mmax", st.mmax, "largest Fourier mode");
        sub->add_option("--tol", st.tol, "tolerance (tail bound for eisenstein, override for verify)");
    }
    eis->add_option("--order", st.order, "q-series order");
    verify->add_option("--suite", st.suite, "fast or full");
    verify->add_option("--check", st.checks, "run only checks with this id (repeatable)");
    qexp->add_option("--label", st.label, "theta2, lambda, 1-lambda, G0, G1, Ginf, x:N, y:N, f:K:j:N");
    qexp->add_option("--order", st.order, "highest q-power");
    qexp->add_option("--format", st.format, "json or text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        apply_config(app, st);
        if (!n_text.empty()) {
            st.ns.clear();
            std::stringstream ss(n_text);
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    std::size_t pos = 0;
                    st.ns.push_back(std::stoi(item, &pos));
                    if (pos != item.size()) throw UsageError("bad level list " + n_text);
                } catch (const std::logic_error&) {
                    throw UsageError("bad level list " + n_text);
                }
            }
        }
        set_workers(st.workers);
        const bool n_given = st.n != 0 || cusps->count("--n") + classify->count("--n") + scatter->count("--n") + eis->count("--n") > 0;
        auto check_format = [&](std::initializer_list<const char*> allowed) {
            for (const char* f : allowed)
                if (st.format == f) return;
            throw UsageError("unsupported --format " + st.format);
        };
        std::string out;
        if (app.got_subcommand(cusps)) {
            check_format({"json", "csv"});
            out = cmd_cusps(st, n_given);
        } else if (app.got_subcommand(classify)) {
            check_format({"json"});
            out = cmd_classify(st, n_given);
        } else if (app.got_subcommand(scatter)) {
            check_format({"json", "csv"});
            out = cmd_scatter(st, n_given);
        } else if (app.got_subcommand(eis)) {
            check_format({"json"});
            out = cmd_eisenstein(st, n_given);
        } else if (app.got_subcommand(verify)) {
            check_format({"json"});
            std::vector<std::string> overrides;
            if (verify->count("--cmax")) overrides.push_back("cmax");
            if (verify->count("--mmax")) overrides.push_back("mmax");
            out = cmd_verify(st, overrides);
        } else {
            check_format({"json", "text"});
            out = cmd_qexp(st);
        }
        std::cout << out;
        if (!out.empty() && out.back() != '\n') std::cout << '\n';
        return 0;
    } catch (const CheckFailure& f) {
        std::cout << f.record.dump(2) << '\n';
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return error_code(e);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
