#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "restruct/restruct.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitTooLarge = 4;

restruct::instance_document load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw restruct::parse_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return restruct::parse_document(buf.str());
}

std::vector<restruct::money> parse_budget_list(const std::string& s) {
    std::vector<restruct::money> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(restruct::money::parse(item));
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stoi(item));
    return out;
}

void emit(const restruct::json& rep, const std::string& format) {
    if (format == "json")
        std::cout << rep.dump(2) << "\n";
    else
        std::cout << restruct::render_text(rep);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"solution restructuring toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "text";
    app.add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    std::string file;
    int stage = 0;
    bool with_oracle = false;

    auto* solve = app.add_subcommand("solve", "solve one stage's base problem");
    solve->add_option("file", file)->required();
    solve->add_option("--stage", stage);
    solve->add_flag("--oracle", with_oracle);

    int from = 0, to = 1;
    std::string budget_str, objective_str;
    auto* restr = app.add_subcommand("restructure",
                                     "restructure a stage solution toward a goal stage");
    restr->add_option("file", file)->required();
    restr->add_option("--from", from);
    restr->add_option("--to", to);
    restr->add_option("--budget", budget_str);
    restr->add_option("--objective", objective_str)
        ->check(CLI::IsMember({"max-profit", "min-proximity"}));
    restr->add_flag("--oracle", with_oracle);

    int scheme = 1;
    std::string budgets_str, candidates_str;
    auto* traj = app.add_subcommand("trajectory",
                                    "build a multi-stage restructuring trajectory");
    traj->add_option("file", file)->required();
    traj->add_option("--scheme", scheme)->check(CLI::Range(1, 3));
    traj->add_option("--budgets", budgets_str);
    traj->add_option("--candidates", candidates_str);

    CLI11_PARSE(app, argc, argv);

    try {
        auto doc = load(file);
        if (!objective_str.empty())
            doc.options.objective = objective_str == "max-profit"
                                        ? restruct::restructure_objective::max_goal_profit
                                        : restruct::restructure_objective::min_proximity;
        if (solve->parsed()) {
            emit(restruct::cmd_solve(doc, static_cast<std::size_t>(stage),
                                     with_oracle),
                 format);
        } else if (restr->parsed()) {
            std::optional<restruct::money> budget;
            if (!budget_str.empty()) budget = restruct::money::parse(budget_str);
            emit(restruct::cmd_restructure(doc, static_cast<std::size_t>(from),
                                           static_cast<std::size_t>(to), budget,
                                           with_oracle),
                 format);
        } else {
            restruct::detail::traj_options opt;
            opt.scheme = scheme;
            if (!budgets_str.empty()) opt.budgets = parse_budget_list(budgets_str);
            if (!candidates_str.empty())
                opt.candidates = parse_int_list(candidates_str);
            emit(restruct::cmd_trajectory(doc, opt), format);
        }
    } catch (const restruct::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const restruct::invalid_instance& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const restruct::invalid_ops& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const restruct::empty_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const restruct::too_large& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTooLarge;
    } catch (const restruct::infeasible& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
