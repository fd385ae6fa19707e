#pragma once

#include <map>
#include <string>
#include <vector>

#include "hlsdiff/ast.hpp"
#include "hlsdiff/interp.hpp"
#include "hlsdiff/parser.hpp"
#include "hlsdiff/trace.hpp"

namespace hlsdiff {

// Key variables are qualified names, normally the members of a backward
// slice: variables, channels and synthetic "fn.return" entries.
using KeyVariableSet = std::vector<std::string>;

struct UnknownVariable {
    std::string message;
};
struct InputMismatch {
    std::string message;
};

// Inserts a probe statement after every write (let or assignment) whose
// target is a key variable, and marks the program instrumented, which also
// turns on array-access, loop, call and fifo event recording at run time.
// Non-variable key members (channels, returns) are monitored without
// probes. Throws UnknownVariable for names that resolve to nothing.
Program instrument(const Program& p, const KeyVariableSet& kv);

struct Interval {
    Num lo;
    Num hi;
    bool seen = false;

    void include(const Num& v);
    bool same_as(const Interval& o) const;  // value comparison, not repr
};

struct SpectraConfig {
    bool val = true;
    bool offset = true;
    bool loop = true;
    bool stack = true;
    bool fifo = true;
};

// The five runtime spectra categories, plus the declared type of each
// monitored variable so feedback rows can name it.
struct SpectraRecord {
    std::map<std::string, Interval> val;     // per key variable: write values
    std::map<std::string, Interval> offset;  // per key array: access indices
    std::map<std::string, int64_t> loop;     // per label: max iteration count
    std::map<std::string, int64_t> stack;    // per function: max call depth
    std::map<std::string, int64_t> fifo;     // per channel: max occupancy
    std::map<std::string, TypeSpec> types;   // key variable declared types

    std::string to_text() const;
};

SpectraRecord collect_spectra(const ExecTrace& t, const KeyVariableSet& kv,
                              const SymbolTable& syms,
                              const SpectraConfig& cfg = SpectraConfig{});

// merge b into a by interval union and count maximum
void merge_spectra(SpectraRecord& a, const SpectraRecord& b);

enum class Symptom {
    Overflow,
    Truncation,
    OutOfBounds,
    StackOverflow,
    FifoFault,
    DivByZero,
    OrderDependence,
    OutputMismatch
};

const char* symptom_name(Symptom s);

struct SymptomEntry {
    Symptom cls;
    std::string variable;
    std::string sw_evidence;
    std::string hw_evidence;
};

struct DiscrepancyReport {
    std::vector<SymptomEntry> symptoms;

    bool discrepant() const { return !symptoms.empty(); }
    bool has(Symptom s) const;
    std::vector<std::string> classes() const;  // distinct names, report order
    std::string to_text() const;
};

// Classification, in priority order: width symptoms (overflow, truncation),
// then hardware fault classes, then order dependence, then the residual
// output mismatch. Throws InputMismatch when the traces record different
// inputs.
DiscrepancyReport compare_spectra(const ExecTrace& sw_trace,
                                  const SpectraRecord& sw_rec,
                                  const ExecTrace& hw_trace,
                                  const SpectraRecord& hw_rec,
                                  const HardwareConfig& cfg);

struct FeedbackRow {
    std::string type;
    std::string name;
    Num lo;
    Num hi;
};
using FeedbackArray = std::vector<FeedbackRow>;

// one (type, name, min, max) row per monitored variable, name-sorted
FeedbackArray feedback_array(const SpectraRecord& s);
std::string feedback_to_text(const FeedbackArray& rows);

}  // namespace hlsdiff
