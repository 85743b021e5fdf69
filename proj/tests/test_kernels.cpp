#include <doctest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "dcc/kernels.hpp"

using namespace dcc;

TEST_CASE("serial and parallel paths visit every index once") {
    for (const std::size_t n : {0, 1, 7, 1000}) {
        std::vector<int> serial(n, 0);
        std::vector<int> parallel(n, 0);
        for_each_index(n, execution::serial, [&](std::size_t i) { serial[i] += static_cast<int>(i * i % 97); });
        for_each_index(n, execution::parallel, [&](std::size_t i) { parallel[i] += static_cast<int>(i * i % 97); });
        CHECK(serial == parallel);
    }
    CHECK(max_threads() >= 1);
}

TEST_CASE("the lowest failing index is rethrown") {
    for (const auto exec : {execution::serial, execution::parallel}) {
        std::atomic<int> visited{0};
        try {
            for_each_index(100, exec, [&](std::size_t i) {
                ++visited;
                if (i == 17 || i == 60) {
                    throw std::runtime_error(std::to_string(i));
                }
            });
            FAIL("expected an exception");
        } catch (const std::runtime_error &e) {
            CHECK(std::string(e.what()) == "17");
        }
    }
}
