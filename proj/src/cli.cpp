#include "deptree/cli.hpp"

#include "deptree/copula_algebra.hpp"
#include "deptree/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace deptree {

namespace {

std::string shortest(double value) {
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, end);
}

std::string fixed4(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.4f", value);
    return buffer;
}

std::string dot_quote(const std::string& name) {
    std::string out = "\"";
    for (const char c : name) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ValidationError("cannot write \"" + path + "\"");
    file << text;
    if (!file) throw ValidationError("failed writing \"" + path + "\"");
}

RankOptions rank_options(const RunConfig& config) {
    return {config.ties, config.seed.value_or(0)};
}

std::size_t checked_order(const RunConfig& config, std::size_t samples) {
    const auto k = config.lattice_order;
    if (k != 0 && (k < 2 || k > samples)) {
        throw ValidationError("lattice order " + std::to_string(k) + " outside [2, " +
                              std::to_string(samples) + "] (use 0 for the default)");
    }
    return k;
}

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const InvariantError& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace

std::string tree_to_json(const DependenceTree& tree) {
    nlohmann::ordered_json doc;
    doc["nodes"] = tree.nodes;
    doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : tree.edges) {
        nlohmann::ordered_json edge;
        edge["u"] = tree.nodes.at(e.u);
        edge["v"] = tree.nodes.at(e.v);
        edge["weight"] = e.weight;
        edge["signed_value"] = e.signed_value;
        doc["edges"].push_back(std::move(edge));
    }
    doc["measure"] = std::string(measure_tag(tree.measure));
    doc["lattice_order"] = tree.lattice_order;
    if (tree.coverage_ratio) {
        doc["coverage_ratio"] = *tree.coverage_ratio;
    } else {
        doc["coverage_ratio"] = nullptr;
    }
    return doc.dump(2) + "\n";
}

std::string tree_to_dot(const DependenceTree& tree) {
    std::ostringstream out;
    out << "graph deptree {\n";
    for (const auto& name : tree.nodes) out << "  " << dot_quote(name) << ";\n";
    for (const auto& e : tree.edges) {
        out << "  " << dot_quote(tree.nodes.at(e.u)) << " -- " << dot_quote(tree.nodes.at(e.v))
            << " [label=\"" << fixed4(e.weight) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

int cmd_learn(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto data = load_dataset_file(config.input);
        const auto order = checked_order(config, data.rows());
        const auto tree = learn_structure(data, config.measure, order, rank_options(config));
        const auto json = tree_to_json(tree);
        if (!config.json_path.empty()) write_file(config.json_path, json);
        if (!config.dot_path.empty()) write_file(config.dot_path, tree_to_dot(tree));
        if (config.json_path.empty() && config.dot_path.empty()) out << json;
        return kExitOk;
    });
}

int cmd_synth(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::ifstream in(config.spec);
        if (!in) throw ValidationError("cannot open \"" + config.spec + "\"");
        auto spec = load_synthetic_spec(in);
        if (config.seed) spec.seed = *config.seed;
        const auto data = generate_synthetic(spec);
        if (config.output.empty()) {
            write_dataset(data, out);
        } else {
            std::ostringstream csv;
            write_dataset(data, csv);
            write_file(config.output, csv.str());
        }
        return kExitOk;
    });
}

int cmd_measure(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto comma = config.pair.find(',');
        if (comma == std::string::npos) throw ValidationError("--pair expects A,B");
        const auto a = config.pair.substr(0, comma);
        const auto b = config.pair.substr(comma + 1);
        const auto data = load_dataset_file(config.input);
        const auto i = data.index_of(a);
        const auto j = data.index_of(b);
        if (!i) throw ValidationError("unknown column \"" + a + "\"");
        if (!j) throw ValidationError("unknown column \"" + b + "\"");
        if (*i == *j) throw ValidationError("cannot measure a column against itself");
        const auto order = resolve_lattice_order(config.measure,
                                                 checked_order(config, data.rows()), data.rows());

        const auto options = rank_options(config);
        const auto rx = rank_column(data.column(*i), options, *i);
        const auto ry = rank_column(data.column(*j), options, *j);
        double value = 0.0;
        switch (config.measure) {
            case Measure::rho_abs:
                value = spearman_rho(rx, ry);
                break;
            case Measure::mi_cell:
                value = mutual_info_cell(rx, ry, order);
                break;
            case Measure::mi_kde:
                value = mutual_info_kde(data.column(*i), data.column(*j), rx, ry, order);
                break;
        }
        out << "measure: " << (config.measure == Measure::rho_abs ? "rho" : measure_tag(config.measure))
            << '\n'
            << "pair: " << a << ',' << b << '\n'
            << "value: " << shortest(value) << '\n';
        if (config.measure != Measure::rho_abs) out << "lattice_order: " << order << '\n';
        return kExitOk;
    });
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    switch (config.command) {
        case RunConfig::Command::learn: return cmd_learn(config, out, err);
        case RunConfig::Command::synth: return cmd_synth(config, out, err);
        case RunConfig::Command::measure: return cmd_measure(config, out, err);
    }
    err << "internal error: unknown command\n";
    return kExitInternal;
}

}  // namespace deptree
