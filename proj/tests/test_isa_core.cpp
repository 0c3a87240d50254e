#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ohmscope/assembler.hpp"
#include "ohmscope/errors.hpp"
#include "ohmscope/isa.hpp"
#include "ohmscope/rng.hpp"
#include "ohmscope/simulator.hpp"
#include "reference_interpreter.hpp"

using namespace ohmscope;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string fixture(const std::string& name) {
    return read_file(std::string(OHMSCOPE_TEST_DATA_DIR) + "/" + name);
}

// Test-local recount of the packed-state toggle, independent of the
// simulator's implementation.
int recount_toggle(const MachineState& a, const MachineState& b) {
    int bits = 0;
    auto pop8 = [](unsigned v) {
        int c = 0;
        while (v) { c += static_cast<int>(v & 1u); v >>= 1; }
        return c;
    };
    for (std::size_t i = 0; i < a.registers.size(); ++i)
        bits += pop8(static_cast<unsigned>(a.registers[i] ^ b.registers[i]));
    for (std::size_t i = 0; i < a.memory.size(); ++i)
        bits += pop8(static_cast<unsigned>(a.memory[i] ^ b.memory[i]));
    bits += (a.zero_flag != b.zero_flag) ? 1 : 0;
    bits += (a.halted != b.halted) ? 1 : 0;
    return bits;
}

bool states_agree(const MachineState& got, const refsim::RefState& want) {
    if (got.registers.size() != want.regs.size()) return false;
    for (std::size_t i = 0; i < got.registers.size(); ++i)
        if (static_cast<int>(got.registers[i]) != want.regs[i]) return false;
    for (std::size_t i = 0; i < got.memory.size(); ++i)
        if (static_cast<int>(got.memory[i]) != want.mem[i]) return false;
    return got.zero_flag == want.z && got.halted == want.halted;
}

// Random straight-line program: no branches, so it always runs to the end
// (or faults identically in both interpreters).
Program random_straight_line(Isa isa, SplitMix64& g) {
    static const std::vector<std::string> fpga_pool = {"LOAD", "STORE", "SET", "ADD", "SUB",
                                                       "AND",  "OR",    "XOR", "SHL", "SHR"};
    static const std::vector<std::string> atmega_pool = {"MOV", "LDI", "ADD", "SUB", "AND",
                                                         "OR",  "EOR", "LSL", "LSR", "CPI"};
    const auto& pool = isa == Isa::FPGA12 ? fpga_pool : atmega_pool;
    int len = 1 + static_cast<int>(g.next_below(20));
    std::string src;
    for (int i = 0; i < len; ++i) {
        const std::string& mn = pool[static_cast<std::size_t>(g.next_below(pool.size()))];
        const InstructionSpec* spec = find_by_mnemonic(isa, mn);
        REQUIRE(spec != nullptr);
        src += mn;
        bool first = true;
        for (Operand op : spec->operand_schema) {
            if (op == Operand::NONE) break;
            src += first ? " " : ", ";
            first = false;
            if (op == Operand::REG)
                src += "R" + std::to_string(g.next_below(static_cast<uint64_t>(register_count(isa))));
            else
                src += std::to_string(g.next_below(256));
        }
        src += "\n";
    }
    return assemble(src, isa);
}

}  // namespace

TEST_CASE("instruction tables hold the full sets with unique codes") {
    const auto& fpga = isa_table(Isa::FPGA12);
    const auto& atmega = isa_table(Isa::ATMEGA);
    CHECK(fpga.size() == 12);
    CHECK(atmega.size() == 13);
    for (const auto& table : {fpga, atmega}) {
        for (std::size_t i = 0; i < table.size(); ++i)
            for (std::size_t j = i + 1; j < table.size(); ++j) {
                CHECK(table[i].mnemonic != table[j].mnemonic);
                CHECK(table[i].opcode_value != table[j].opcode_value);
            }
    }
    CHECK(dataset_class_names(Isa::FPGA12).size() == 12);
    CHECK(dataset_class_names(Isa::ATMEGA).size() == 11);
    for (const std::string& name : dataset_class_names(Isa::ATMEGA)) {
        CHECK(name != "CPI");
        CHECK(name != "RJMP");
    }
    CHECK(register_count(Isa::FPGA12) == 8);
    CHECK(register_count(Isa::ATMEGA) == 32);
}

TEST_CASE("encoding matches the fixed word layout") {
    Program p = assemble("SET R1, 5", Isa::FPGA12);
    REQUIRE(p.words.size() == 1);
    CHECK(p.words[0].bytes[0] == 0x03);
    CHECK(p.words[0].bytes[1] == 0x01);
    CHECK(p.words[0].bytes[2] == 0x05);
    CHECK(p.words[0].bytes[3] == 0x00);

    Program q = assemble("ADD R1, R2, R3", Isa::FPGA12);
    REQUIRE(q.words.size() == 1);
    CHECK(q.words[0].bytes[0] == 0x04);
    CHECK(q.words[0].bytes[1] == 0x01);
    CHECK(q.words[0].bytes[2] == 0x02);
    CHECK(q.words[0].bytes[3] == 0x03);
}

TEST_CASE("assembler rejects bad input with the offending line") {
    CHECK_THROWS_WITH_AS(assemble("MOV R1, R9", Isa::FPGA12),
                         doctest::Contains("line 1"), AssembleError);
    CHECK_THROWS_AS(assemble("FROB R1", Isa::FPGA12), AssembleError);
    CHECK_THROWS_AS(assemble("ADD R1, R2", Isa::FPGA12), AssembleError);     // wrong arity
    CHECK_THROWS_AS(assemble("SET R1, 999", Isa::FPGA12), AssembleError);    // immediate range
    CHECK_THROWS_AS(assemble("LOAD R1, R2", Isa::ATMEGA), AssembleError);    // wrong ISA
    CHECK_THROWS_WITH_AS(assemble("SET R1, 5\nSET R9, 1", Isa::FPGA12),
                         doctest::Contains("line 2"), AssembleError);
}

TEST_CASE("comments and blank lines are skipped, source map points at real lines") {
    Program p = assemble("; header\n\nSET R1, 5 ; set it\n\nSET R2, 6\n", Isa::FPGA12);
    REQUIRE(p.words.size() == 2);
    CHECK(p.source_map[0] == 3);
    CHECK(p.source_map[1] == 5);
}

TEST_CASE("disassemble is a two-sided inverse of assemble") {
    // all mnemonics of both sets, canonical text
    for (Isa isa : {Isa::FPGA12, Isa::ATMEGA}) {
        std::string src;
        for (const auto& spec : isa_table(isa)) {
            src += spec.mnemonic;
            bool first = true;
            int reg = 1;
            for (Operand op : spec.operand_schema) {
                if (op == Operand::NONE) break;
                src += first ? " " : ", ";
                first = false;
                src += op == Operand::REG ? "R" + std::to_string(reg++) : "7";
            }
            src += "\n";
        }
        Program p = assemble(src, isa);
        CHECK(disassemble(p) == src);
        Program back = assemble(disassemble(p), isa);
        REQUIRE(back.words.size() == p.words.size());
        for (std::size_t i = 0; i < p.words.size(); ++i)
            CHECK(back.words[i].bytes == p.words[i].bytes);
    }

    // randomized programs
    SplitMix64 g(0xD15A55E3B1E5ull);
    for (int rep = 0; rep < 50; ++rep) {
        Isa isa = rep % 2 == 0 ? Isa::FPGA12 : Isa::ATMEGA;
        Program p = random_straight_line(isa, g);
        Program back = assemble(disassemble(p), isa);
        REQUIRE(back.words.size() == p.words.size());
        for (std::size_t i = 0; i < p.words.size(); ++i)
            CHECK(back.words[i].bytes == p.words[i].bytes);
    }
}

TEST_CASE("undecodable opcode reports the word index") {
    Program p = assemble("SET R1, 5", Isa::FPGA12);
    p.words[0].bytes[0] = 0xFF;
    CHECK_THROWS_WITH_AS(disassemble(p), doctest::Contains("word 0"), CorruptProgramError);
    MachineState st = make_initial_state(Isa::FPGA12);
    CHECK_THROWS_AS(step(st, p), CorruptProgramError);
}

TEST_CASE("arithmetic is modulo 256") {
    Program p = assemble("ADD R1, R2, R3", Isa::FPGA12);
    MachineState st = make_initial_state(Isa::FPGA12);
    st.registers[2] = 200;
    st.registers[3] = 100;
    ExecutionEvent ev = step(st, p);
    CHECK(st.registers[1] == 44);
    CHECK(ev.has_register_write);
    CHECK(ev.register_write.index == 1);
    CHECK(ev.register_write.new_value == 44);
}

TEST_CASE("taken branch skips exactly one instruction") {
    std::string src;
    for (int i = 0; i < 13; ++i) src += "SET R0, 0\n";
    Program p = assemble(src, Isa::FPGA12);
    p.words[10] = assemble("BEQ R1, 7", Isa::FPGA12).words[0];
    MachineState st = make_initial_state(Isa::FPGA12);
    st.registers[1] = 7;
    st.pc = 10;
    ExecutionEvent ev = step(st, p);
    CHECK(ev.pc_before == 10);
    CHECK(st.pc == 12);

    // not taken: falls through
    st.pc = 10;
    st.registers[1] = 8;
    st.halted = false;
    step(st, p);
    CHECK(st.pc == 11);
}

TEST_CASE("one-bit shifts drive the zero flag") {
    Program p = assemble("LSL R1\nLSR R1\nLSR R1\n", Isa::ATMEGA);
    MachineState st = make_initial_state(Isa::ATMEGA);
    st.registers[1] = 0b00000001;
    step(st, p);
    CHECK(st.registers[1] == 0b00000010);
    CHECK_FALSE(st.zero_flag);
    step(st, p);
    CHECK(st.registers[1] == 0b00000001);
    CHECK_FALSE(st.zero_flag);
    step(st, p);
    CHECK(st.registers[1] == 0);
    CHECK(st.zero_flag);
}

TEST_CASE("data transfer leaves the zero flag untouched") {
    Program p = assemble("CPI R1, 0\nMOV R2, R1\nLDI R3, 0\n", Isa::ATMEGA);
    MachineState st = make_initial_state(Isa::ATMEGA);
    step(st, p);
    CHECK(st.zero_flag);  // R1 == 0
    step(st, p);
    CHECK(st.zero_flag);  // MOV wrote 0 but must not touch Z... still true
    step(st, p);
    CHECK(st.zero_flag);  // LDI wrote 0, Z still from CPI
}

TEST_CASE("memory access past the end faults without mutating state") {
    Program p = assemble("LOAD R1, R2, 10", Isa::FPGA12);
    MachineState st = make_initial_state(Isa::FPGA12);
    st.registers[2] = 250;
    MachineState before = st;
    CHECK_THROWS_AS(step(st, p), AddressFaultError);
    CHECK(st.pc == before.pc);
    CHECK(st.registers == before.registers);

    Program q = assemble("STORE R1, R2, 255", Isa::FPGA12);
    st = make_initial_state(Isa::FPGA12);
    st.registers[2] = 1;
    CHECK_THROWS_AS(step(st, q), AddressFaultError);

    // boundary address 255 itself is fine
    Program r = assemble("STORE R1, R2, 255", Isa::FPGA12);
    st = make_initial_state(Isa::FPGA12);
    st.registers[1] = 9;
    step(st, r);
    CHECK(st.memory[255] == 9);
}

TEST_CASE("backward branch before program start faults") {
    Program p = assemble("CPI R1, 0\nBREQ -5\n", Isa::ATMEGA);
    MachineState st = make_initial_state(Isa::ATMEGA);
    step(st, p);
    REQUIRE(st.zero_flag);
    CHECK_THROWS_AS(step(st, p), AddressFaultError);
}

TEST_CASE("stepping a halted machine is a contract violation") {
    Program p = assemble("SET R1, 1", Isa::FPGA12);
    MachineState st = make_initial_state(Isa::FPGA12);
    step(st, p);
    REQUIRE(st.halted);
    CHECK_THROWS_AS(step(st, p), ContractError);
}

TEST_CASE("empty program halts immediately with an empty trace") {
    Program p;
    p.isa = Isa::FPGA12;
    MachineState st = make_initial_state(Isa::FPGA12);
    auto events = run(st, p, 100);
    CHECK(events.empty());
    CHECK(st.halted);
}

TEST_CASE("fpga12 fixture runs every opcode and halts within 14 steps") {
    Program p = assemble(fixture("fpga12_all_ops.asm"), Isa::FPGA12);
    REQUIRE(p.words.size() == 12);
    MachineState st = make_initial_state(Isa::FPGA12);
    auto events = run(st, p, 100);
    CHECK(st.halted);
    CHECK(events.size() <= 14);
    CHECK(st.registers[1] == 5);
    CHECK(st.registers[2] == 5);
    CHECK(st.registers[3] == 160);
    CHECK(st.registers[4] == 5);
    CHECK(st.registers[5] == 0);
    CHECK(st.registers[6] == 15);
    CHECK(st.registers[7] == 0);
    CHECK(st.memory[10] == 5);
    // the BEQ was taken, so BNEQ never executed
    for (const auto& ev : events) CHECK(ev.executed_mnemonic != "BNEQ");

    refsim::RefState ref = refsim::ref_initial(Isa::FPGA12);
    refsim::ref_run(ref, p, 100);
    CHECK(states_agree(st, ref));
}

TEST_CASE("atmega fixture loops, branches both ways and halts") {
    Program p = assemble(fixture("atmega_all_ops.asm"), Isa::ATMEGA);
    MachineState st = make_initial_state(Isa::ATMEGA);
    auto events = run(st, p, 100);
    CHECK(st.halted);
    CHECK(st.registers[16] == 0);
    CHECK(st.registers[18] == 4);
    CHECK(st.registers[20] == 7);

    // every mnemonic in the set executed at least once
    for (const auto& spec : isa_table(Isa::ATMEGA)) {
        bool seen = false;
        for (const auto& ev : events) seen = seen || ev.executed_mnemonic == spec.mnemonic;
        CHECK_MESSAGE(seen, spec.mnemonic);
    }

    refsim::RefState ref = refsim::ref_initial(Isa::ATMEGA);
    refsim::ref_run(ref, p, 100);
    CHECK(states_agree(st, ref));
}

TEST_CASE("non-matching compare loop truncates at max_steps") {
    Program p = assemble("LDI R16, 5\nCPI R16, 9\nBRNE -2\n", Isa::ATMEGA);
    MachineState st = make_initial_state(Isa::ATMEGA);
    auto events = run(st, p, 100);
    CHECK(events.size() == 100);
    CHECK_FALSE(st.halted);
}

TEST_CASE("simulator matches the table-built reference on random programs") {
    SplitMix64 g(0x5EEDC0DE5EEDull);
    for (int rep = 0; rep < 200; ++rep) {
        Isa isa = rep % 2 == 0 ? Isa::FPGA12 : Isa::ATMEGA;
        Program p = random_straight_line(isa, g);

        MachineState st = make_initial_state(isa);
        refsim::RefState ref = refsim::ref_initial(isa);
        bool faulted = false, ref_faulted = false;
        try {
            run(st, p, 1000);
        } catch (const AddressFaultError&) {
            faulted = true;
        }
        try {
            refsim::ref_run(ref, p, 1000);
        } catch (const std::runtime_error&) {
            ref_faulted = true;
        }
        REQUIRE(faulted == ref_faulted);
        if (!faulted) {
            CHECK(states_agree(st, ref));
            CHECK(st.halted);
        }
    }
}

TEST_CASE("registers stay in byte range and pc stays bounded") {
    SplitMix64 g(0xB0A4DED00Dull);
    for (int rep = 0; rep < 40; ++rep) {
        Isa isa = rep % 2 == 0 ? Isa::FPGA12 : Isa::ATMEGA;
        Program p = random_straight_line(isa, g);
        MachineState st = make_initial_state(isa);
        try {
            while (!st.halted) {
                step(st, p);
                CHECK(st.pc <= p.words.size());
            }
        } catch (const AddressFaultError&) {
        }
    }
}

TEST_CASE("hamming toggle equals the packed-state recount") {
    SplitMix64 g(0x7066713EAAull);
    for (int rep = 0; rep < 60; ++rep) {
        Isa isa = rep % 2 == 0 ? Isa::FPGA12 : Isa::ATMEGA;
        Program p = random_straight_line(isa, g);
        MachineState st = make_initial_state(isa);
        try {
            while (!st.halted) {
                MachineState before = st;
                ExecutionEvent ev = step(st, p);
                int expect = recount_toggle(before, st);
                CHECK(ev.hamming_toggle == expect);
                CHECK(ev.hamming_toggle >= 0);
            }
        } catch (const AddressFaultError&) {
        }
    }

    // a self-move changes nothing but pc: toggle must be exactly zero
    Program p = assemble("MOV R1, R1\nMOV R1, R1\n", Isa::ATMEGA);
    MachineState st = make_initial_state(Isa::ATMEGA);
    ExecutionEvent ev = step(st, p);
    CHECK(ev.hamming_toggle == 0);
}
