#include "acx/report.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>

using namespace acx;

namespace {

std::vector<int> int_list(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ','))
        out.push_back(std::stoi(part));
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact cohomology and taming audits for almost complex nilmanifold models"};
    app.require_subcommand(1);

    std::string manifest, truncations, bidegree, format = "json", psi = "fundamental";
    for (const char* name : {"validate", "diamond", "verify", "taming", "report"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("manifest", manifest, "manifest JSON file")->required();
        sub->add_option("--truncations", truncations, "comma-separated Fourier truncations, e.g. 0,1,2");
        sub->add_option("--bidegree", bidegree, "restrict diamond entries to p,q");
        sub->add_option("--format", format, "json or table")->check(CLI::IsMember({"json", "table"}));
        sub->add_option("--psi", psi, "fundamental, or a (1,1)-form such as (i)*t1*tb1 + (i)*t2*tb2");
    }
    CLI11_PARSE(app, argc, argv);
    std::string command = app.get_subcommands().front()->get_name();

    if (const char* w = std::getenv("ACX_WORKERS"))
        set_workers(std::strtoul(w, nullptr, 10));

    auto start = std::chrono::steady_clock::now();
    nlohmann::json rep;
    bool fatal = false;
    try {
        RunOptions opts;
        if (!truncations.empty())
            opts.truncations = int_list(truncations);
        if (!bidegree.empty()) {
            auto pq = int_list(bidegree);
            if (pq.size() != 2)
                throw ParseError("--bidegree", "expected p,q");
            opts.bidegree = Bidegree{pq[0], pq[1]};
        }
        opts.psi = psi;
        RunResult res = run(command, parse_manifest(manifest), opts);
        rep = res.report;
        fatal = res.fatal;
    } catch (const ParseError& e) {
        rep = failure_report("ParseError", e.field, e.what());
        fatal = true;
    } catch (const ValidationError& e) {
        rep = failure_report("ValidationError", e.invariant, e.what());
        fatal = true;
    } catch (const std::exception& e) {
        rep = failure_report("error", "", e.what());
        fatal = true;
    }
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    rep["timing"] = {{"elapsed_ms", long(elapsed.count())}};

    if (format == "table")
        std::cout << render_table(rep);
    else
        std::cout << rep.dump(2) << "\n";
    return fatal ? 1 : 0;
}
