#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "srreg/dataset.hpp"
#include "srreg/errors.hpp"

using namespace srreg;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("parse_csv with header") {
    CsvOptions opts;
    opts.header = true;
    Dataset ds = parse_csv("x,y\n1,2\n2,3\n3,4\n4,5\n", opts);
    CHECK(ds.n() == 4);
    CHECK(ds.p() == 1);
    CHECK(ds.x(2, 0) == 3.0);
    CHECK(ds.y[3] == 5.0);
    CHECK(ds.names.size() == 2);
    CHECK(ds.names[1] == "y");
}

TEST_CASE("parse_csv diagnostics carry the row number") {
    CHECK_THROWS_WITH_AS(parse_csv("1,2\n2,3\nbad,4\n4,5\n", {}),
                         doctest::Contains("row 3"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_csv("1,2\n2,3,9\n3,4\n", {}), doctest::Contains("ragged row 2"),
                         ValidationError);
    // n < p + 2
    CHECK_THROWS_AS(parse_csv("1,2,3,4\n5,6,7,8\n", {}), ValidationError);
}

TEST_CASE("response column by name") {
    CsvOptions opts;
    opts.header = true;
    opts.response_column = "mid";
    Dataset ds = parse_csv("a,mid,b\n1,10,2\n3,11,4\n5,12,6\n7,13,8\n9,14,0\n", opts);
    CHECK(ds.p() == 2);
    CHECK(ds.y[0] == 10.0);
    CHECK(ds.x(0, 1) == 2.0);
    CHECK(ds.names[2] == "mid");

    opts.response_column = "missing";
    CHECK_THROWS_WITH_AS(parse_csv("a,b\n1,2\n3,4\n5,6\n", opts),
                         doctest::Contains("not found"), ValidationError);
}

TEST_CASE("builtin datasets have the documented shapes") {
    Dataset star = builtin_dataset("star");
    CHECK(star.n() == 47);
    CHECK(star.p() == 1);

    Dataset hbk = builtin_dataset("hbk");
    CHECK(hbk.n() == 75);
    CHECK(hbk.p() == 3);
    // the first 14 observations are the leverage block: carriers far from
    // the bulk, which lives in [0, 3.4]
    for (int i = 0; i < 14; ++i) CHECK(hbk.x(i, 2) > 25.0);
    for (int i = 14; i < 75; ++i) CHECK(hbk.x(i, 2) < 4.0);

    CHECK_THROWS_WITH_AS(builtin_dataset("nope"), doctest::Contains("star"), ValidationError);
}

TEST_CASE("star csv round-trips exactly") {
    Dataset star = builtin_dataset("star");
    std::string path = temp_path("srreg_star_roundtrip.csv");
    write_csv(star, path);
    CsvOptions opts;
    opts.header = true;
    Dataset loaded = load_csv(path, opts);
    std::remove(path.c_str());
    REQUIRE(loaded.n() == star.n());
    REQUIRE(loaded.p() == star.p());
    CHECK(loaded.x == star.x);
    CHECK(loaded.y == star.y);
    CHECK(loaded.hash() == star.hash());
}

TEST_CASE("dataset hash tracks content") {
    Dataset a = builtin_dataset("star");
    Dataset b = builtin_dataset("star");
    CHECK(a.hash() == b.hash());
    b.y[0] += 1e-9;
    CHECK(a.hash() != b.hash());
}

TEST_CASE("missing file is a validation error") {
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", {}), ValidationError);
}
