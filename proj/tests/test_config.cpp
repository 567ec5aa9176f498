#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "facsca/config.hpp"
#include "facsca/error.hpp"

using namespace facsca;

TEST_CASE("config carries documented defaults for every key") {
    const Config cfg;
    CHECK(cfg.get_int("chip.size") == 64);
    CHECK(cfg.get_double("eval.beta") == 1.0);
    CHECK(cfg.get("match.features") == "2dpca");
    for (const auto& info : Config::registry()) {
        CHECK(!info.description.empty());
        CHECK(cfg.get(info.key) == info.default_value);
    }
    CHECK_THROWS_WITH_AS(cfg.get("skin.unknown"), doctest::Contains("unknown config key"),
                         Error);
}

TEST_CASE("config files override defaults and reject unknown keys") {
    const auto path = (std::filesystem::temp_directory_path() / "facsca_test.cfg").string();
    std::ofstream(path) << "# comment line\n"
                        << "chip.size = 48\n"
                        << "eigen.phi_override=2.5  # trailing comment\n"
                        << "\n";
    const Config cfg = Config::load_file(path);
    CHECK(cfg.get_int("chip.size") == 48);
    CHECK(cfg.get_double("eigen.phi_override") == 2.5);
    CHECK(cfg.get_int("eigen.components") == 8); // untouched default

    std::ofstream(path) << "nope.nope=1\n";
    CHECK_THROWS_WITH_AS(Config::load_file(path), doctest::Contains("unknown config key"),
                         Error);
    std::ofstream(path) << "just a line\n";
    CHECK_THROWS_WITH_AS(Config::load_file(path), doctest::Contains("expected key=value"),
                         Error);
    CHECK_THROWS_AS(Config::load_file("/nonexistent.cfg"), Error);
    std::filesystem::remove(path);

    Config typed;
    typed.set("chip.size", "abc");
    CHECK_THROWS_WITH_AS(typed.get_int("chip.size"), doctest::Contains("not an integer"),
                         Error);
}

TEST_CASE("config echo lists every key sorted") {
    const Config cfg;
    const std::string echo = cfg.echo();
    size_t lines = 0;
    for (char c : echo) lines += c == '\n';
    CHECK(lines == Config::registry().size());
    CHECK(echo.find("chip.size=64\n") != std::string::npos);
    // Sorted output: first registry key alphabetically appears first.
    CHECK(echo.rfind("chip.size=", 0) == 0);
}
