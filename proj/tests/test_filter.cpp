#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "hlsdiff/filter.hpp"
#include "hlsdiff/input.hpp"

using namespace hlsdiff;

namespace {

InputEntry vec(std::vector<int64_t> vals) {
    InputEntry e;
    e.rank = 1;
    for (auto v : vals) e.values.push_back(Num::of_int(v));
    return e;
}

InputEntry scalar(int64_t v) {
    InputEntry e;
    e.rank = 0;
    e.values.push_back(Num::of_int(v));
    return e;
}

InputEntry matrix(int64_t rows, int64_t cols, std::vector<int64_t> vals) {
    InputEntry e;
    e.rank = 2;
    e.rows = rows;
    e.cols = cols;
    for (auto v : vals) e.values.push_back(Num::of_int(v));
    return e;
}

TestInput one(InputEntry e) {
    TestInput in;
    in.entries.push_back(std::move(e));
    return in;
}

}  // namespace

TEST_CASE("an empty table always executes") {
    RecordTable t;
    CHECK(should_execute(t, one(vec({1, 2, 3}))) == Decision::Execute);
    CHECK(should_execute(t, one(scalar(0))) == Decision::Execute);
}

TEST_CASE("a value below the recorded range forces execution") {
    RecordTable t;
    update_record(t, one(vec({2, 5})));
    CHECK(should_execute(t, one(vec({1, 4, 5}))) == Decision::Execute);
}

TEST_CASE("values inside the recorded range and shape are skipped") {
    RecordTable t;
    update_record(t, one(vec({1, 5, 3})));
    CHECK(should_execute(t, one(vec({1, 3, 5}))) == Decision::Skip);
    CHECK(should_execute(t, one(vec({2, 2, 2}))) == Decision::Skip);
}

TEST_CASE("a value above the recorded range forces execution") {
    RecordTable t;
    update_record(t, one(vec({1, 5, 3})));
    CHECK(should_execute(t, one(vec({1, 3, 6}))) == Decision::Execute);
}

TEST_CASE("an unseen vector length is a new shape") {
    RecordTable t;
    update_record(t, one(vec({1, 5, 3})));
    CHECK(should_execute(t, one(vec({2, 2}))) == Decision::Execute);
    update_record(t, one(vec({2, 2})));
    CHECK(should_execute(t, one(vec({3, 3}))) == Decision::Skip);
}

TEST_CASE("matrix reshapes count as new shapes even with old values") {
    RecordTable t;
    update_record(t, one(matrix(2, 3, {1, 2, 3, 4, 5, 6})));
    CHECK(should_execute(t, one(matrix(2, 3, {2, 2, 2, 2, 2, 2}))) ==
          Decision::Skip);
    CHECK(should_execute(t, one(matrix(3, 2, {1, 2, 3, 4, 5, 6}))) ==
          Decision::Execute);
    update_record(t, one(matrix(3, 2, {1, 2, 3, 4, 5, 6})));
    CHECK(t.slots[0].shapes.count("dim:2x3") == 1);
    CHECK(t.slots[0].shapes.count("dim:3x2") == 1);
}

TEST_CASE("shape keys name scalar, length and dimensions") {
    CHECK(shape_key(scalar(7)) == "scalar");
    CHECK(shape_key(vec({1, 2, 3, 4})) == "len:4");
    CHECK(shape_key(matrix(2, 3, {0, 0, 0, 0, 0, 0})) == "dim:2x3");
}

TEST_CASE("recording an input makes its exact replay a skip") {
    RecordTable t;
    TestInput in;
    in.entries.push_back(vec({4, 9, 1}));
    in.entries.push_back(scalar(12));
    CHECK(should_execute(t, in) == Decision::Execute);
    update_record(t, in);
    CHECK(should_execute(t, in) == Decision::Skip);
}

TEST_CASE("updates widen ranges and bump the version") {
    RecordTable t;
    CHECK(t.version == 0);
    update_record(t, one(vec({2, 5})));
    CHECK(t.version == 1);
    CHECK(t.executions == 1);
    CHECK(t.slots[0].lo.i == 2);
    CHECK(t.slots[0].hi.i == 5);

    update_record(t, one(vec({1, 4, 5})));
    CHECK(t.version == 2);
    CHECK(t.slots[0].lo.i == 1);
    CHECK(t.slots[0].hi.i == 5);
    CHECK(t.slots[0].shapes.count("len:2") == 1);
    CHECK(t.slots[0].shapes.count("len:3") == 1);
}

TEST_CASE("per-slot ranges are independent") {
    RecordTable t;
    TestInput a;
    a.entries.push_back(scalar(10));
    a.entries.push_back(scalar(-5));
    update_record(t, a);

    TestInput probe;
    probe.entries.push_back(scalar(-5));  // below slot 0's range
    probe.entries.push_back(scalar(-5));
    CHECK(should_execute(t, probe) == Decision::Execute);

    TestInput inside;
    inside.entries.push_back(scalar(10));
    inside.entries.push_back(scalar(-5));
    CHECK(should_execute(t, inside) == Decision::Skip);
}

TEST_CASE("an arity mismatch is never silently skipped") {
    RecordTable t;
    update_record(t, one(vec({1, 2})));
    TestInput two;
    two.entries.push_back(vec({1, 2}));
    two.entries.push_back(scalar(0));
    CHECK(should_execute(t, two) == Decision::Execute);
}

TEST_CASE("the audit replays every skip against its table version") {
    RecordTable t;
    FilterAudit audit(t);

    update_record(t, one(vec({2, 5})));
    audit.on_update(t);

    // at version 1, [3, 4] is inside the range: a justified skip
    TestInput skipped = one(vec({3, 4}));
    CHECK(should_execute(t, skipped) == Decision::Skip);
    CHECK(audit.skip_justified(1, skipped));

    // the same input was NOT skippable at version 0 (empty table)
    CHECK(!audit.skip_justified(0, skipped));

    update_record(t, one(vec({0, 9})));
    audit.on_update(t);
    TestInput wide = one(vec({7, 8, 9}));
    CHECK(should_execute(t, wide) == Decision::Execute);  // len:3 unseen
    CHECK(!audit.skip_justified(2, wide));  // honest audit: not a skip

    // out-of-range versions are never justified
    CHECK(!audit.skip_justified(-1, skipped));
    CHECK(!audit.skip_justified(99, skipped));
}

TEST_CASE("the table renders its state deterministically") {
    RecordTable t;
    update_record(t, one(vec({2, 5})));
    t.skips = 3;
    std::string text = record_table_to_text(t);
    CHECK(text.find("version 1") != std::string::npos);
    CHECK(text.find("executions 1") != std::string::npos);
    CHECK(text.find("skips 3") != std::string::npos);
    CHECK(text.find("slot 0 range [2, 5] shapes {len:2}") != std::string::npos);
    CHECK(record_table_to_text(t) == text);
}

TEST_CASE("a filtered stream keeps only widening inputs") {
    RecordTable t;
    FilterAudit audit(t);
    std::vector<TestInput> stream = {
        one(vec({2, 5})),   // execute: empty table
        one(vec({3, 4})),   // skip
        one(vec({1, 4})),   // execute: widens low end
        one(vec({1, 5})),   // skip
        one(vec({1, 9})),   // execute: widens high end
        one(vec({2, 8})),   // skip
    };
    int executed = 0;
    for (const auto& in : stream) {
        if (should_execute(t, in) == Decision::Execute) {
            update_record(t, in);
            audit.on_update(t);
            ++executed;
        } else {
            int64_t v = t.version;
            ++t.skips;
            CHECK(audit.skip_justified(v, in));
        }
    }
    CHECK(executed == 3);
    CHECK(t.skips == 3);
    CHECK(t.slots[0].lo.i == 1);
    CHECK(t.slots[0].hi.i == 9);
}
