// SPDX-License-Identifier: Apache-2.0
//
// nrcb: 5G NR codebook library, CLI and link-level simulation harness
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nrcb/overhead.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#ifndef NRCB_CLI_PATH
#define NRCB_CLI_PATH "nrcb"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd =
        env + std::string(NRCB_CLI_PATH) + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) r.out += buf.data();
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST_CASE("cli codeword prints the textbook vector") {
    const auto r = run_cli(
        "codeword --kind type1sp --n1 2 --n2 1 --o1 1 --o2 1 --m1 0 --n 0 "
        "--n3 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "subband 0\n(0.5,0)\n(0.5,0)\n(0.5,0)\n(0.5,0)\n");
}

TEST_CASE("cli rejects invalid flags and configurations with exit 2") {
    CHECK(run_cli("codeword --kind type1sp --n1 2 --n2 1 --o1 1 --o2 1 "
                  "--m1 9 --n 0")
              .exit_code == 2);
    CHECK(run_cli("codeword --definitely-not-a-flag").exit_code == 2);
    CHECK(run_cli("simulate --kinds type1sp --drops 0 --n1 2 --n2 1")
              .exit_code == 2);
    CHECK(run_cli("encode --kind type3").exit_code == 2);
}

TEST_CASE("cli encode output feeds decode") {
    const auto enc = run_cli(
        "encode --kind type2 --n1 4 --n2 2 --L 4 --n3 4 --seed 9 --output "
        "/tmp/nrcb_cli_pmi.json");
    CHECK(enc.exit_code == 0);
    const auto dec = run_cli(
        "decode --kind type2 --n1 4 --n2 2 --L 4 --n3 4 --pmi "
        "/tmp/nrcb_cli_pmi.json");
    CHECK(dec.exit_code == 0);
    CHECK(dec.out.find("subband 3") != std::string::npos);

    // the hex payload decodes to the same precoder
    std::ifstream in("/tmp/nrcb_cli_pmi.json");
    std::string js((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
    const auto hex_pos = js.find("\"payload_hex\": \"");
    REQUIRE(hex_pos != std::string::npos);
    const auto start = hex_pos + 16;
    const auto hex = js.substr(start, js.find('"', start) - start);
    const auto dec2 = run_cli("decode --kind type2 --n1 4 --n2 2 --L 4 --n3 4 "
                              "--payload " + hex);
    CHECK(dec2.exit_code == 0);
    CHECK(dec2.out == dec.out);
}

TEST_CASE("cli codeword with an explicit multi-beam report") {
    const std::string pmi =
        R"({"q1":0,"q2":0,"i12":0,"i13":[0],"i14":[[7,0,7,0]],)"
        R"("i21":[[0,0,3,0]]})";
    const auto cw = run_cli("codeword --kind type2 --n1 2 --n2 2 --L 2 "
                            "--n3 1 --pmi '" + pmi + "'");
    CHECK(cw.exit_code == 0);
    // the decode subcommand on the same report prints the same matrix
    const auto dec = run_cli("decode --kind type2 --n1 2 --n2 2 --L 2 "
                             "--n3 1 --pmi '" + pmi + "'");
    CHECK(dec.exit_code == 0);
    CHECK(cw.out == dec.out);
    CHECK(cw.out.find("subband 0") == 0);
}

TEST_CASE("cli honors NR_CB_SEED as the default seed") {
    const auto via_env = run_cli(
        "encode --kind type1sp --n1 2 --n2 2 --n3 4",
        "NR_CB_SEED=77 ");
    const auto via_flag =
        run_cli("encode --kind type1sp --n1 2 --n2 2 --n3 4 --seed 77");
    const auto other =
        run_cli("encode --kind type1sp --n1 2 --n2 2 --n3 4 --seed 78");
    CHECK(via_env.exit_code == 0);
    CHECK(via_env.out == via_flag.out);
    CHECK(via_env.out != other.out);
}

TEST_CASE("cli roundtrip reports fidelity numbers") {
    const auto r = run_cli(
        "roundtrip --kind etype2 --n1 4 --n2 2 --L 4 --beta 1/2 --n3 8 "
        "--n-psk 16 --seed 4");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("nmse ") != std::string::npos);
    CHECK(r.out.find("indicator_count ") != std::string::npos);
    CHECK(r.out.find("serialized_bits ") != std::string::npos);
}

TEST_CASE("cli overhead matches the library") {
    const auto r = run_cli("overhead --rank 1 --n3 10 --L 4 --m-nz 4 --m-vr 2");
    CHECK(r.exit_code == 0);
    // spot-check the Type II row against overhead_count
    nrcb::OverheadParams p;
    p.rank = 1;
    p.n_3 = 10;
    p.l_beams = 4;
    p.m_nz = {4};
    const auto expect = nrcb::overhead_count(nrcb::CodebookKind::TYPE2, p);
    CHECK(r.out.find("type2," + std::to_string(expect) + ",") !=
          std::string::npos);
}

TEST_CASE("cli simulate is byte-deterministic and honors config files") {
    const std::string flags =
        "simulate --kinds type1sp genie --n1 2 --n2 2 --K 2 --drops 2 "
        "--n3 4 --seed 6";
    const auto a = run_cli(flags);
    const auto b = run_cli(flags);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);

    {
        std::ofstream cfg("/tmp/nrcb_cli_cfg.json");
        cfg << R"({"kind":"type1sp","n1":2,"n2":2,"K":2,"drops":2,"n_3":4,)"
            << R"("seed":6})";
    }
    const auto c = run_cli(
        "simulate --config /tmp/nrcb_cli_cfg.json --kinds type1sp genie");
    CHECK(c.exit_code == 0);
    CHECK(c.out == a.out);

    // explicit flag overrides the file value
    const auto d = run_cli(
        "simulate --config /tmp/nrcb_cli_cfg.json --kinds type1sp genie "
        "--seed 7");
    CHECK(d.exit_code == 0);
    CHECK(d.out != a.out);
}
