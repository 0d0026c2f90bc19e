#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "drgrade/checkpoint.hpp"
#include "fixture.hpp"
#include "test_util.hpp"

using namespace drg;

TEST_CASE("checkpoint round-trip is bit-exact, including awkward doubles") {
    const std::string dir = test::temp_dir("drg_ckpt");
    const std::string path = dir + "/a.ckpt";

    std::vector<Parameter> params;
    params.emplace_back("layer.weight", test::random_tensor({3, 4, 2, 2}, 42, -10, 10));
    auto odd = make_tensor({1, 1, 1, 8});
    odd->v = {0.0,
              -0.0,
              std::numeric_limits<double>::denorm_min(),
              std::numeric_limits<double>::max(),
              -std::numeric_limits<double>::min(),
              1.0 / 3.0,
              -1e308,
              6.02214076e23};
    params.emplace_back("layer.bias", odd);

    save_checkpoint(path, "model=toy\nnote=round trip\n", params);
    Checkpoint ck = load_checkpoint(path);

    CHECK(ck.metadata == "model=toy\nnote=round trip\n");
    REQUIRE(ck.records.size() == 2);
    for (const auto& p : params) {
        const auto* rec = ck.find(p.name);
        REQUIRE(rec != nullptr);
        CHECK(rec->shape == p.tensor->shape);
        // bit-exact, so compare representations rather than values (0.0 == -0.0)
        REQUIRE(rec->values.size() == p.tensor->v.size());
        for (std::size_t i = 0; i < rec->values.size(); ++i) {
            std::uint64_t a, b;
            std::memcpy(&a, &rec->values[i], 8);
            std::memcpy(&b, &p.tensor->v[i], 8);
            CHECK(a == b);
        }
    }
}

TEST_CASE("two saves of the same parameters produce identical files") {
    const std::string dir = test::temp_dir("drg_ckpt_det");
    std::vector<Parameter> params;
    params.emplace_back("w", test::random_tensor({2, 3, 4, 5}, 7));
    save_checkpoint(dir + "/x.ckpt", "m", params);
    save_checkpoint(dir + "/y.ckpt", "m", params);
    std::ifstream fx(dir + "/x.ckpt", std::ios::binary);
    std::ifstream fy(dir + "/y.ckpt", std::ios::binary);
    std::string bx((std::istreambuf_iterator<char>(fx)), {});
    std::string by((std::istreambuf_iterator<char>(fy)), {});
    CHECK(bx == by);
    CHECK(!bx.empty());
    CHECK(bx.substr(0, 4) == "DRCK");
}

TEST_CASE("bad magic and truncated files are rejected") {
    const std::string dir = test::temp_dir("drg_ckpt_bad");
    {
        std::ofstream f(dir + "/bad.ckpt", std::ios::binary);
        f << "NOPE" << std::string(64, '\0');
    }
    CHECK_THROWS_AS(load_checkpoint(dir + "/bad.ckpt"), IoError);

    std::vector<Parameter> params;
    params.emplace_back("w", test::random_tensor({4, 4, 4, 4}, 8));
    save_checkpoint(dir + "/ok.ckpt", "", params);
    {
        std::ifstream in(dir + "/ok.ckpt", std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), {});
        std::ofstream out(dir + "/trunc.ckpt", std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
    }
    CHECK_THROWS_AS(load_checkpoint(dir + "/trunc.ckpt"), IoError);

    CHECK_THROWS_AS(load_checkpoint(dir + "/does_not_exist.ckpt"), IoError);
}

TEST_CASE("find returns null for a missing parameter") {
    const std::string dir = test::temp_dir("drg_ckpt_find");
    std::vector<Parameter> params;
    params.emplace_back("present", make_tensor({1, 1, 1, 1}, 3.5));
    save_checkpoint(dir + "/f.ckpt", "", params);
    Checkpoint ck = load_checkpoint(dir + "/f.ckpt");
    CHECK(ck.find("present") != nullptr);
    CHECK(ck.find("absent") == nullptr);
}

TEST_CASE("empty parameter list and empty metadata round-trip") {
    const std::string dir = test::temp_dir("drg_ckpt_empty");
    save_checkpoint(dir + "/e.ckpt", "", {});
    Checkpoint ck = load_checkpoint(dir + "/e.ckpt");
    CHECK(ck.metadata.empty());
    CHECK(ck.records.empty());
}
