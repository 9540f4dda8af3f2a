#include <cmath>
#include <sstream>

#include "doctest.h"
#include "gfsl/errors.hpp"
#include "gfsl/io.hpp"

using namespace gfsl;

TEST_CASE("shortest round-trip formatting") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 3.0571418390238, 0.0}) {
        std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(15.0) == "15");
}

TEST_CASE("csv writer") {
    std::ostringstream os;
    write_csv(os, {"a", "b"}, {{"1", "2"}, {"3", "4"}});
    CHECK(os.str() == "a,b\n1,2\n3,4\n");
    std::ostringstream bad;
    CHECK_THROWS_AS(write_csv(bad, {"a", "b"}, {{"1"}}), DomainError);
}

TEST_CASE("Laplace spectrum reader") {
    std::istringstream in("# sample\nmu,multiplicity\n\n0.5, 1\n2.0,3\n");
    LaplaceSpectrum s = read_laplace_csv(in, 2);
    REQUIRE(s.entries.size() == 2);
    CHECK(s.entries[0].mu == 0.5);
    CHECK(s.entries[1].multiplicity == 3);
    CHECK(s.genus == 2);

    std::istringstream wrong_header("lambda,multiplicity\n0.5,1\n");
    CHECK_THROWS_AS(read_laplace_csv(wrong_header, 2), DomainError);
    std::istringstream not_number("mu,multiplicity\nabc,1\n");
    try {
        read_laplace_csv(not_number, 2);
        FAIL("expected an error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    std::istringstream unsorted("mu,multiplicity\n2.0,1\n1.0,1\n");
    CHECK_THROWS_AS(read_laplace_csv(unsorted, 2), DomainError);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_laplace_csv(empty, 2), DomainError);
    CHECK_THROWS_AS(read_laplace_file("/nonexistent/mu.csv", 2), DomainError);
}

TEST_CASE("length spectrum round trip") {
    LengthSpectrum ls;
    ls.genus = 2;
    ls.cutoff = 7.0;
    ls.primitives = {{3.0571418390238, 24}, {4.8969049, 24}};
    std::ostringstream os;
    write_length_spectrum_csv(os, ls);
    CHECK(os.str().rfind("length,multiplicity,is_primitive\n", 0) == 0);

    std::istringstream in(os.str());
    LengthSpectrum back = read_length_spectrum_csv(in, 2);
    REQUIRE(back.primitives.size() == 2);
    CHECK(back.primitives[0].length == ls.primitives[0].length);
    CHECK(back.primitives[1].multiplicity == 24);
    CHECK(back.cutoff == 2.0 * ls.primitives[0].length);  // largest listed length

    std::istringstream bad("length,multiplicity,is_primitive\n3.0,24,2\n");
    CHECK_THROWS_AS(read_length_spectrum_csv(bad, 2), DomainError);
    std::istringstream cols("length,multiplicity,is_primitive\n3.0,24\n");
    CHECK_THROWS_AS(read_length_spectrum_csv(cols, 2), DomainError);
}
