#pragma once

#include "alhazen/disk.hpp"
#include "alhazen/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace alhazen {
namespace cli {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";

inline const char* variant_name(disk::RootVariant v) {
    switch (v) {
        case disk::RootVariant::FourSimpleUnimodular: return "four_simple_unimodular";
        case disk::RootVariant::TwoUnimodularTwoOff: return "two_unimodular_two_off";
        case disk::RootVariant::MultipleDoublePlusTwoSimple: return "multiple_double_plus_two_simple";
        default: return "multiple_triple_plus_opposite";
    }
}

inline const char* conic_class_name(conic::ConicClass c) {
    switch (c) {
        case conic::ConicClass::Ellipse: return "ellipse";
        case conic::ConicClass::Hyperbola: return "hyperbola";
        case conic::ConicClass::Parabola: return "parabola";
        case conic::ConicClass::Circle: return "circle";
        default: return "degenerate_or_line";
    }
}

inline const char* tangency_kind_name(conic::TangencyKind k) {
    switch (k) {
        case conic::TangencyKind::Ellipse: return "ellipse";
        case conic::TangencyKind::Hyperbola: return "hyperbola";
        default: return "undetermined";
    }
}

inline const char* domain_kind_name(smetric::DomainKind k) {
    switch (k) {
        case smetric::DomainKind::SumLess: return "ellipse";
        case smetric::DomainKind::SumGreater: return "ellipse-exterior";
        case smetric::DomainKind::DiffLess: return "hyperbola";
        default: return "hyperbola-exterior";
    }
}

inline json complex_json(Complex z) {
    return json{{"re", z.real()}, {"im", z.imag()}};
}

inline json meta_json(json tolerances) {
    json modules;
    for (const char* m : {"poly", "disk", "caustic", "conic", "smetric", "io", "cli"})
        modules[m] = kVersion;
    return json{{"version", kVersion}, {"modules", modules}, {"tolerances", std::move(tolerances)}};
}

// kind:f1,f2,r with kind in {ellipse, ellipse-exterior, hyperbola, hyperbola-exterior}
inline smetric::ConicDomain parse_domain(std::string_view text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos)
        throw std::invalid_argument("domain must be kind:f1,f2,r");
    const std::string_view kind = text.substr(0, colon);
    const auto parts = io::split(text.substr(colon + 1), ',');
    if (parts.size() != 3) throw std::invalid_argument("domain must be kind:f1,f2,r");
    smetric::ConicDomain dom;
    dom.f1 = io::parse_complex(parts[0]);
    dom.f2 = io::parse_complex(parts[1]);
    dom.r = io::parse_double(parts[2]);
    if (kind == "ellipse") dom.kind = smetric::DomainKind::SumLess;
    else if (kind == "ellipse-exterior") dom.kind = smetric::DomainKind::SumGreater;
    else if (kind == "hyperbola") dom.kind = smetric::DomainKind::DiffLess;
    else if (kind == "hyperbola-exterior") dom.kind = smetric::DomainKind::DiffGreater;
    else throw std::invalid_argument("unknown domain kind: '" + std::string(kind) + "'");
    return dom;
}

// lo:hi:step, or a single level
inline std::vector<double> parse_levels(std::string_view text) {
    const auto parts = io::split(text, ':');
    if (parts.size() == 1) return {io::parse_double(parts[0])};
    if (parts.size() != 3)
        throw std::invalid_argument("levels must be lo:hi:step or a single value");
    const double lo = io::parse_double(parts[0]);
    const double hi = io::parse_double(parts[1]);
    const double step = io::parse_double(parts[2]);
    if (step <= 0.0 || hi < lo) throw std::invalid_argument("levels must satisfy lo <= hi, step > 0");
    std::vector<double> levels;
    for (int k = 0; lo + k * step <= hi + 1e-12; ++k)
        levels.push_back(std::min(lo + k * step, hi));
    return levels;
}

inline smetric::DomainKind parse_side_kind(std::string_view text) {
    if (text == "sum-less") return smetric::DomainKind::SumLess;
    if (text == "sum-greater") return smetric::DomainKind::SumGreater;
    if (text == "diff-less") return smetric::DomainKind::DiffLess;
    if (text == "diff-greater") return smetric::DomainKind::DiffGreater;
    throw std::invalid_argument("unknown kind: '" + std::string(text) + "'");
}

inline json domain_json(const smetric::ConicDomain& dom) {
    return json{{"kind", domain_kind_name(dom.kind)},
                {"f1", io::format_complex(dom.f1)},
                {"f2", io::format_complex(dom.f2)},
                {"r", dom.r}};
}

inline json pa_solution_json(const disk::PASolution& sol) {
    json roots = json::array();
    for (std::size_t i = 0; i < sol.all_roots.roots.size(); ++i) {
        json entry = complex_json(sol.all_roots.roots[i]);
        entry["residual"] = sol.all_roots.residuals[i];
        roots.push_back(std::move(entry));
    }
    json points = json::array();
    for (Complex u : sol.reflection_points) points.push_back(complex_json(u));
    return json{{"all_roots", std::move(roots)},
                {"reflection_points", std::move(points)},
                {"s", sol.metric_value},
                {"blocked", sol.blocked}};
}

inline json locus_json(const caustic::ApollonianLocus& locus) {
    if (locus.is_line)
        return json{{"is_line", true},
                    {"point", complex_json(locus.line_point)},
                    {"dir", complex_json(locus.line_dir)}};
    return json{{"is_line", false},
                {"center", complex_json(locus.center)},
                {"radius", locus.radius}};
}

inline int write_document(const std::string& text, const std::string& path, std::ostream& out,
                          std::ostream& err) {
    if (path.empty()) {
        out << text;
        return 0;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        err << "cannot open output file: " << path << '\n';
        return 1;
    }
    file << text;
    return 0;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"reflection points, catacaustics, and the triangular ratio metric"};
    app.require_subcommand(1);

    std::string z1_text, z2_text, radiant_text, foci_text, a_text, b_text;
    std::string domain_text, center_text, levels_text, kind_text, format = "json", output_path;
    double r_value = 0.0, p_value = 0.0, q_value = 0.0;
    int samples = 360, rays = 720;

    CLI::App* disk_cmd = app.add_subcommand("disk", "reflection points on the unit circle");
    disk_cmd->add_option("--z1", z1_text, "first point (complex literal)")->required();
    disk_cmd->add_option("--z2", z2_text, "second point (complex literal)")->required();
    disk_cmd->add_option("--output", output_path, "write the document to a file");

    CLI::App* apo_cmd = app.add_subcommand("apollonius", "reflection points via the Apollonius circle route");
    apo_cmd->add_option("--z1", z1_text, "first point (complex literal)")->required();
    apo_cmd->add_option("--z2", z2_text, "second point (complex literal)")->required();
    apo_cmd->add_option("--output", output_path, "write the document to a file");

    CLI::App* classify_cmd = app.add_subcommand("classify", "root pattern of the reflection quartic");
    classify_cmd->add_option("--z1", z1_text, "first point (complex literal)")->required();
    classify_cmd->add_option("--z2", z2_text, "second point (complex literal)")->required();
    classify_cmd->add_option("--output", output_path, "write the document to a file");

    CLI::App* caustic_cmd = app.add_subcommand("caustic", "catacaustic of the unit circle");
    caustic_cmd->add_option("--radiant", radiant_text, "radiant point (complex literal)")->required();
    caustic_cmd->add_option("--samples", samples, "parameter sample count")->check(CLI::PositiveNumber);
    caustic_cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv", "svg"}));
    caustic_cmd->add_option("--output", output_path, "write the document to a file");

    CLI::App* conic_cmd = app.add_subcommand("conic", "tangency points for sources +1/-1 on a conic mirror");
    conic_cmd->add_option("--foci", foci_text, "foci as f1,f2 (complex literals)");
    conic_cmd->add_option("--r", r_value, "focal sum or difference");
    conic_cmd->add_option("--kind", kind_text, "domain side: sum-less, sum-greater, diff-less, diff-greater");
    conic_cmd->add_option("--a", a_text, "coefficient a (complex literal)");
    conic_cmd->add_option("--b", b_text, "coefficient b (complex literal)");
    conic_cmd->add_option("--p", p_value, "coefficient p (real)");
    conic_cmd->add_option("--q", q_value, "coefficient q (real)");
    conic_cmd->add_option("--output", output_path, "write the document to a file");

    CLI::App* smetric_cmd = app.add_subcommand("smetric", "triangular ratio metric on a conic domain");
    smetric_cmd->add_option("--z1", z1_text, "first point (complex literal)")->required();
    smetric_cmd->add_option("--z2", z2_text, "second point (complex literal)")->required();
    smetric_cmd->add_option("--domain", domain_text, "domain as kind:f1,f2,r")->required();
    smetric_cmd->add_option("--output", output_path, "write the document to a file");

    CLI::App* levelset_cmd = app.add_subcommand("levelset", "metric contour family on a conic domain");
    levelset_cmd->add_option("--domain", domain_text, "domain as kind:f1,f2,r")->required();
    levelset_cmd->add_option("--center", center_text, "contour center (complex literal)")->required();
    levelset_cmd->add_option("--levels", levels_text, "levels as lo:hi:step or a single value")->required();
    levelset_cmd->add_option("--rays", rays, "ray count")->check(CLI::PositiveNumber);
    levelset_cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv", "svg"}));
    levelset_cmd->add_option("--output", output_path, "write the document to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    json doc;
    std::string rendered; // csv/svg payload when requested

    if (disk_cmd->parsed() || apo_cmd->parsed() || classify_cmd->parsed()) {
        Complex z1, z2;
        try {
            z1 = io::parse_complex(z1_text);
            z2 = io::parse_complex(z2_text);
        } catch (const std::exception& e) {
            err << e.what() << '\n';
            return 2;
        }
        try {
            doc["command"] = disk_cmd->parsed() ? "disk" : apo_cmd->parsed() ? "apollonius" : "classify";
            doc["inputs"] = json{{"z1", io::format_complex(z1)}, {"z2", io::format_complex(z2)}};
            if (classify_cmd->parsed()) {
                const disk::PointPair pair{z1, z2};
                const disk::RootClassification cls = disk::classify_roots(pair);
                int distinct = 4;
                if (cls.variant == disk::RootVariant::TwoUnimodularTwoOff) distinct = 2;
                if (cls.variant == disk::RootVariant::MultipleDoublePlusTwoSimple) distinct = 3;
                if (cls.variant == disk::RootVariant::MultipleTriplePlusOpposite) distinct = 2;
                doc["result"] = json{{"variant", variant_name(cls.variant)},
                                     {"discriminant", complex_json(cls.discriminant_value)},
                                     {"e1", disk::e1(pair)},
                                     {"e2", disk::e2(pair)},
                                     {"distinct_unimodular_roots", distinct}};
                doc["meta"] = meta_json(json{{"classification_rel_tol", 1e-9}});
            } else {
                const disk::PASolution sol = disk_cmd->parsed()
                                                 ? disk::pa_points_disk({z1, z2})
                                                 : disk::pa_points_apollonius({z1, z2});
                doc["result"] = pa_solution_json(sol);
                doc["meta"] = meta_json(json{{"unimodular_tol", disk::kUnimodularTol},
                                             {"root_residual_tol", 1e-10}});
            }
        } catch (const std::exception& e) {
            err << e.what() << '\n';
            return 1;
        }
    } else if (caustic_cmd->parsed()) {
        Complex radiant;
        try {
            radiant = io::parse_complex(radiant_text);
        } catch (const std::exception& e) {
            err << e.what() << '\n';
            return 2;
        }
        try {
            const caustic::CausticCurve curve = caustic::caustic_sample(radiant, samples);
            doc["command"] = "caustic";
            doc["inputs"] = json{{"radiant", io::format_complex(radiant)}, {"samples", samples}};
            json rows = json::array();
            for (const caustic::CausticSample& s : curve.samples) {
                json row{{"phi", s.phi}};
                row["re"] = s.point.real();
                row["im"] = s.point.imag();
                rows.push_back(std::move(row));
            }
            doc["result"] = json{{"closed", curve.closed},
                                 {"samples", std::move(rows)},
                                 {"e1_locus", locus_json(curve.e1_circle)},
                                 {"e2_locus", locus_json(curve.e2_circle)}};
            doc["meta"] = meta_json(json{{"singularity_tol", 1e-12}});
            if (format == "csv") rendered = io::caustic_csv(curve);
            if (format == "svg") rendered = io::svg_document(io::caustic_polylines(curve, samples));
        } catch (const std::exception& e) {
            err << e.what() << '\n';
            return 1;
        }
    } else if (conic_cmd->parsed()) {
        conic::Conic mirror;
        json inputs;
        const bool from_foci = !foci_text.empty();
        try {
            if (from_foci == !(a_text.empty() && b_text.empty()))
                throw std::invalid_argument("pass either --foci with --r, or --a/--b/--p/--q");
            if (from_foci) {
                const auto parts = io::split(foci_text, ',');
                if (parts.size() != 2) throw std::invalid_argument("--foci needs f1,f2");
                const Complex f1 = io::parse_complex(parts[0]);
                const Complex f2 = io::parse_complex(parts[1]);
                inputs = json{{"foci", json::array({io::format_complex(f1), io::format_complex(f2)})},
                              {"r", r_value}};
                if (!kind_text.empty()) {
                    parse_side_kind(kind_text); // validated here, echoed below
                    inputs["kind"] = kind_text;
                }
                mirror = conic::conic_from_foci(f1, f2, r_value);
            } else {
                mirror.a = io::parse_complex(a_text);
                mirror.b = io::parse_complex(b_text);
                mirror.p = p_value;
                mirror.q = q_value;
                inputs = json{{"a", io::format_complex(mirror.a)},
                              {"b", io::format_complex(mirror.b)},
                              {"p", p_value},
                              {"q", q_value}};
            }
        } catch (const std::exception& e) {
            err << e.what() << '\n';
            return 2;
        }
        try {
            const conic::SexticF4 f4 = conic::f4_coefficients(mirror);
            const poly::Poly sextic = conic::sextic_poly(f4);
            const poly::RootSet rs = poly::poly_roots(sextic);
            const conic::TangencySolution tangency = conic::tangency_points(mirror);
            doc["command"] = "conic";
            doc["inputs"] = std::move(inputs);
            json coeffs = json::array();
            for (Complex w : f4.w) coeffs.push_back(complex_json(w));
            json roots = json::array();
            for (std::size_t i = 0; i < rs.roots.size(); ++i) {
                json entry = complex_json(rs.roots[i]);
                entry["residual"] = rs.residuals[i];
                entry["multiplicity"] = rs.multiplicity_estimates[i];
                roots.push_back(std::move(entry));
            }
            json tps = json::array();
            for (const conic::TangencyPoint& tp : tangency.points) {
                json entry = complex_json(tp.point);
                entry["sum"] = tp.sum;
                entry["kind"] = tangency_kind_name(tp.tangency_kind);
                entry["on_curve_residual"] = tp.on_curve_residual;
                tps.push_back(std::move(entry));
            }
            doc["result"] = json{{"conic",
                                  json{{"a", complex_json(mirror.a)},
                                       {"b", complex_json(mirror.b)},
                                       {"p", mirror.p},
                                       {"q", mirror.q}}},
                                 {"class", conic_class_name(conic::classify_conic(mirror))},
                                 {"sextic", std::move(coeffs)},
                                 {"roots", std::move(roots)},
                                 {"tangency_points", std::move(tps)},
                                 {"blocked", conic::segment_blocked(mirror)}};
            if (tangency.minimizer_index) {
                const conic::TangencyPoint& best = tangency.points[*tangency.minimizer_index];
                doc["result"]["minimizer_index"] = *tangency.minimizer_index;
                doc["result"]["minimizer"] = complex_json(best.point);
                doc["result"]["s"] = 2.0 / best.sum;
            } else {
                doc["result"]["minimizer_index"] = nullptr;
                doc["result"]["minimizer"] = nullptr;
                doc["result"]["s"] = 1.0;
            }
            doc["meta"] = meta_json(json{{"on_curve_rel_tol", 1e-6}, {"root_residual_tol", 1e-10}});
        } catch (const std::exception& e) {
            err << e.what() << '\n';
            return 1;
        }
    } else if (smetric_cmd->parsed()) {
        Complex z1, z2;
        smetric::ConicDomain dom;
        try {
            z1 = io::parse_complex(z1_text);
            z2 = io::parse_complex(z2_text);
            dom = parse_domain(domain_text);
        } catch (const std::exception& e) {
            err << e.what() << '\n';
            return 2;
        }
        try {
            const double s = smetric::smetric_conic(z1, z2, dom);
            doc["command"] = "smetric";
            doc["inputs"] = json{{"z1", io::format_complex(z1)},
                                 {"z2", io::format_complex(z2)},
                                 {"domain", domain_json(dom)}};
            doc["result"] = json{{"s", s}};
            doc["meta"] = meta_json(json{{"on_curve_rel_tol", 1e-6}, {"root_residual_tol", 1e-10}});
        } catch (const std::exception& e) {
            err << e.what() << '\n';
            return 1;
        }
    } else if (levelset_cmd->parsed()) {
        Complex center;
        smetric::ConicDomain dom;
        std::vector<double> levels;
        try {
            center = io::parse_complex(center_text);
            dom = parse_domain(domain_text);
            levels = parse_levels(levels_text);
        } catch (const std::exception& e) {
            err << e.what() << '\n';
            return 2;
        }
        try {
            const std::vector<smetric::LevelSet> family =
                smetric::levelset_family(dom, center, levels, rays);
            doc["command"] = "levelset";
            json level_inputs = json::array();
            for (double t : levels) level_inputs.push_back(t);
            doc["inputs"] = json{{"domain", domain_json(dom)},
                                 {"center", io::format_complex(center)},
                                 {"levels", std::move(level_inputs)},
                                 {"rays", rays}};
            json blocks = json::array();
            for (const smetric::LevelSet& ls : family) {
                json points = json::array();
                for (Complex p : ls.points) points.push_back(complex_json(p));
                json gaps = json::array();
                for (double ang : ls.unresolved_rays) gaps.push_back(ang);
                blocks.push_back(json{{"level", ls.level},
                                      {"points", std::move(points)},
                                      {"unresolved_rays", std::move(gaps)}});
            }
            doc["result"] = json{{"levels", std::move(blocks)}};
            doc["meta"] = meta_json(json{{"rays", rays},
                                         {"bisection_tol", smetric::detail::kBracketTol},
                                         {"level_acceptance", 5e-5}});
            if (format == "csv") rendered = io::levelset_csv(family);
            if (format == "svg") {
                std::vector<io::Polyline> curves;
                for (const smetric::LevelSet& ls : family)
                    for (io::Polyline& c : io::levelset_polylines(ls, rays))
                        curves.push_back(std::move(c));
                rendered = io::svg_document(curves);
            }
        } catch (const std::exception& e) {
            err << e.what() << '\n';
            return 1;
        }
    }

    if (!rendered.empty()) return write_document(rendered, output_path, out, err);
    return write_document(doc.dump(2) + "\n", output_path, out, err);
}

} // namespace cli
} // namespace alhazen
