#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "strictmod/cli.hpp"

int main(int argc, char** argv)
{
    strictmod::CliOptions opt;
    CLI::App app{"strictmod: strict module computations over k((pi))"};
    std::string commands;
    for (const auto& c : strictmod::cli_commands())
        commands += (commands.empty() ? "" : ", ") + c;
    app.add_option("command", opt.command, "one of: " + commands)->required();
    app.add_option("inputs", opt.inputs, "input file (bound also takes e=, N=, q=)");
    app.add_option("--prec", opt.prec, "working precision (default: file, then $STRICTMOD_PREC, then 20)")->check(CLI::Range(2, 4096));
    std::string out;
    app.add_option("--out", out, "write the report here instead of stdout");
    app.add_option("--cap", opt.cap, "largest residue algebra dimension q^n for roundtrip")->check(CLI::PositiveNumber);
    std::string tower;
    app.add_option("--tower", tower, "tower file for points / gap");
    std::string brk;
    app.add_option("--break", brk, "measured break for bound");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (!out.empty())
        opt.out = out;
    if (!tower.empty())
        opt.tower_file = tower;
    if (!brk.empty())
        opt.break_value = brk;

    auto res = strictmod::run_cli(opt);
    if (res.exit_code == 2) {
        std::cerr << res.text;
        return 2;
    }
    if (opt.out) {
        std::ofstream f(*opt.out, std::ios::binary);
        if (!f) {
            std::cerr << "strictmod: cannot write " << *opt.out << "\n";
            return 2;
        }
        f << res.text;
    } else {
        std::cout << res.text;
    }
    return res.exit_code;
}
