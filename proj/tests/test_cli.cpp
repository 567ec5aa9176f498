// Drives the built facsca binary end to end through a shell.
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "facsca/detect.hpp"
#include "facsca/fixtures.hpp"
#include "facsca/pnm.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    const std::string out_path = (fs::temp_directory_path() / "facsca_cli_out.txt").string();
    const std::string err_path = (fs::temp_directory_path() / "facsca_cli_err.txt").string();
    const std::string cmd = (env_prefix.empty() ? "" : env_prefix + " ") +
                            std::string(FACSCA_BIN) + " " + args + " >" + out_path + " 2>" +
                            err_path;
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

size_t count_lines(const std::string& text) {
    size_t n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

std::string work_dir() {
    const auto dir = fs::temp_directory_path() / "facsca_cli_work";
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

} // namespace

TEST_CASE("rules subcommand dumps the 512-rule table") {
    const auto result = run("rules");
    CHECK(result.exit_code == 0);
    CHECK(count_lines(result.out) == 512);
    CHECK(result.out.rfind("0: 000 000 000\n", 0) == 0);
    CHECK(result.out.find("\n1: 000 010 000\n") != std::string::npos);
    CHECK(run("rules").out == result.out); // byte-identical reruns
}

TEST_CASE("build-patterns writes the sorted expression database") {
    const std::string dir = work_dir();
    const auto result = run("build-patterns --out " + dir + "/patterns.tsv");
    CHECK(result.exit_code == 0);
    const std::string db = slurp(dir + "/patterns.tsv");
    CHECK(count_lines(db) == 210);
    CHECK(db.find("Happiness\t00$000$0000$1$00000$100000$\n") != std::string::npos);
    CHECK(db.find("Neutral\t00$000$0000$0$00000$000000$\n") != std::string::npos);
    run("build-patterns --out " + dir + "/patterns2.tsv");
    CHECK(slurp(dir + "/patterns2.tsv") == db);

    const auto paper = run("build-patterns --mode paper");
    CHECK(paper.exit_code == 0);
    CHECK(paper.out.find("Happiness\t00$000$0000$1$100000$\n") != std::string::npos);
}

TEST_CASE("help and config plumbing") {
    CHECK(run("--help").exit_code == 0);
    for (const char* sub : {"rules", "build-patterns", "train", "ingest", "query", "eval",
                            "fixtures"}) {
        const auto help = run(std::string(sub) + " --help");
        CHECK(help.exit_code == 0);
        CHECK(!help.out.empty());
    }
    const auto cfg = run("--print-config");
    CHECK(cfg.exit_code == 0);
    CHECK(cfg.out.find("chip.size=64\n") != std::string::npos);

    // Subcommand help lists flags with their defaults.
    const auto fixtures_help = run("fixtures --help");
    CHECK(fixtures_help.out.find("--shots") != std::string::npos);
    CHECK(fixtures_help.out.find("2") != std::string::npos);

    const std::string dir = work_dir();
    std::ofstream(dir + "/cfg") << "chip.size=48\n";
    const auto overridden = run("--config " + dir + "/cfg --print-config");
    CHECK(overridden.out.find("chip.size=48\n") != std::string::npos);

    // FACSCA_CONFIG is the fallback when --config is absent.
    std::ofstream(dir + "/env.cfg") << "chip.size=32\n";
    const auto via_env = run("--print-config", "FACSCA_CONFIG=" + dir + "/env.cfg");
    CHECK(via_env.out.find("chip.size=32\n") != std::string::npos);
    // An explicit --config beats the environment.
    const auto beats_env =
        run("--config " + dir + "/cfg --print-config", "FACSCA_CONFIG=" + dir + "/env.cfg");
    CHECK(beats_env.out.find("chip.size=48\n") != std::string::npos);

    const auto bad = run("--config " + dir + "/missing.cfg --print-config");
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.rfind("ERROR IO:", 0) == 0);

    const auto unknown_flag = run("rules --bogus");
    CHECK(unknown_flag.exit_code == 2);
    CHECK(unknown_flag.err.rfind("ERROR ARGS:", 0) == 0);
}

TEST_CASE("bypass corpus flows through ingest, query and eval") {
    const std::string dir = work_dir();
    CHECK(run("fixtures --out " + dir + " --kind corpus --shots 2 --frames 3").exit_code == 0);

    const auto ingest =
        run("ingest --manifest " + dir + "/manifest.json --index " + dir + "/index.json");
    CHECK(ingest.exit_code == 0);
    CHECK(count_lines(ingest.out) == 20); // one JSON record per shot
    const auto again =
        run("ingest --manifest " + dir + "/manifest.json --index " + dir + "/index2.json");
    CHECK(again.out == ingest.out);
    CHECK(slurp(dir + "/index.json") == slurp(dir + "/index2.json")); // deterministic bytes

    const auto query = run("query --index " + dir + "/index.json --aus 6,12");
    CHECK(query.exit_code == 0);
    CHECK(query.out.rfind("# query label: Happiness\n", 0) == 0);
    CHECK(query.out.find("happiness_00\t3\tHappiness\n") != std::string::npos);
    CHECK(query.out.find("happiness_01\t3\tHappiness\n") != std::string::npos);
    CHECK(count_lines(query.out) == 3);

    const auto eval = run("eval --index " + dir + "/index.json --truth " + dir +
                          "/manifest.json --out " + dir + "/metrics.json");
    CHECK(eval.exit_code == 0);
    CHECK(eval.out.find("Happiness      2   0   0  18     1.0000  1.0000     1.0000    1.0000") !=
          std::string::npos);
    const std::string metrics = slurp(dir + "/metrics.json");
    CHECK(metrics.find("\"overall_accuracy\": 0.9") != std::string::npos);

    const auto missing = run("query --index " + dir + "/nope.json --aus 6,12");
    CHECK(missing.exit_code == 1);
    CHECK(missing.err.rfind("ERROR IO:", 0) == 0);
    CHECK(missing.err.find(dir + "/nope.json") != std::string::npos);

    const auto both = run("query --index " + dir + "/index.json --aus 6 --probe x.pgm");
    CHECK(both.exit_code == 1);
    CHECK(both.err.rfind("ERROR ARGS:", 0) == 0);
}

TEST_CASE("vision-mode training and ingest run through the binary") {
    using namespace facsca;
    const std::string dir = work_dir();
    CHECK(run("fixtures --out " + dir + " --kind all --shots 1 --frames 2").exit_code == 0);

    // Put the scene's own face chip into the identity gallery so the
    // recognizer accepts it alongside a second synthetic identity.
    const vision::Image scene = vision::load_image(dir + "/scene.ppm");
    const vision::DetectParams params;
    const auto boxes = vision::detect_faces(scene, params);
    REQUIRE(boxes.size() == 1);
    const vision::Image chip =
        vision::extract_face_chip(vision::to_gray(scene), boxes[0], 64);
    fs::remove_all(dir + "/faces");
    fs::create_directories(dir + "/faces");
    vision::save_image(chip, dir + "/faces/sceney_1.pgm");
    vision::Image brighter = chip;
    for (auto& byte : brighter.data)
        byte = static_cast<uint8_t>(std::min(255, byte + 3));
    vision::save_image(brighter, dir + "/faces/sceney_2.pgm");
    vision::save_image(fixtures::identity_chip(1, 1, 64), dir + "/faces/other_1.pgm");
    vision::save_image(fixtures::identity_chip(1, 2, 64), dir + "/faces/other_2.pgm");

    const auto train = run("train --gallery " + dir + " --models " + dir + "/models");
    CHECK(train.exit_code == 0);
    CHECK(train.out.find("fusion=yes") != std::string::npos);

    std::ofstream(dir + "/vision_manifest.json")
        << R"([{"shot_id":"scene","frames":["scene.ppm","scene.ppm"],"label":"Neutral"}])";
    const auto ingest = run("ingest --manifest " + dir + "/vision_manifest.json --models " +
                            dir + "/models --index " + dir + "/vindex.json");
    CHECK(ingest.exit_code == 0);
    CHECK(ingest.out.find("\"shot_id\":\"scene\"") != std::string::npos);
    CHECK(ingest.out.find("\"failed\":false") != std::string::npos);
    const auto rerun = run("ingest --manifest " + dir + "/vision_manifest.json --models " +
                           dir + "/models --index " + dir + "/vindex2.json");
    CHECK(rerun.out == ingest.out);
    CHECK(slurp(dir + "/vindex.json") == slurp(dir + "/vindex2.json"));

    // An image probe against the vision index answers without error.
    const auto probe = run("query --index " + dir + "/vindex.json --probe " + dir +
                           "/scene.ppm --models " + dir + "/models");
    CHECK(probe.exit_code == 0);
    CHECK(probe.out.rfind("# query label:", 0) == 0);

    // Vision shots without --models are a usage error.
    const auto no_models = run("ingest --manifest " + dir + "/vision_manifest.json");
    CHECK(no_models.exit_code == 1);
    CHECK(no_models.err.rfind("ERROR ARGS:", 0) == 0);
}
