// qi: command-line front end for the quantized-indexing codec.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qi/qi.hpp"

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_input(const std::string& path) {
  if (path == "-") {
    std::cin >> std::noskipws;
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_output(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  if (path == "-") {
    std::cout.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

// Bits are taken most significant first within each byte.
std::vector<std::uint8_t> unpack_bits(const std::vector<std::uint8_t>& bytes) {
  std::vector<std::uint8_t> bits(bytes.size() * 8);
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
  return bits;
}

std::vector<std::uint8_t> pack_bits(const std::vector<std::uint8_t>& bits) {
  std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  return bytes;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

struct EncodeOptions {
  std::string in = "-", out = "-", alphabet = "bin";
  std::uint32_t block_size = 4096;
  unsigned g = 32;
};

int run_encode(const EncodeOptions& o) {
  const auto data = read_input(o.in);
  const qi::StreamParams params{o.block_size, qi::Precision(o.g)};
  const qi::QuantTable table = qi::build_table(o.block_size, params.g);
  const qi::EncodedStream s =
      o.alphabet == "byte" ? qi::encode_bytes(data, params, table) : qi::encode_bits(unpack_bits(data), params, table);
  write_output(o.out, s.bytes);
  std::cerr << "encoded " << data.size() << " bytes into " << s.bytes.size() << " (counts " << s.layout.count_bits
            << " bits, index " << s.layout.payload_bits() << " bits)\n";
  return 0;
}

int run_decode(const std::string& in, const std::string& out) {
  const qi::DecodedStream d = qi::read_stream(read_input(in));
  if (d.header.alphabet() == 2) {
    if (d.symbols.size() % 8) std::cerr << "note: " << d.symbols.size() << " bits, last byte zero-padded\n";
    write_output(out, pack_bits(d.symbols));
  } else {
    write_output(out, d.symbols);
  }
  return 0;
}

struct TableOptions {
  std::uint32_t n = 4096;
  unsigned g = 32;
  std::uint32_t front = 0;
  std::string dump, load;
};

int run_tables(const TableOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  const qi::QuantTable t = o.load.empty() ? qi::build_table(o.n, qi::Precision(o.g)) : qi::load_table_file(o.load);
  const double build = seconds_since(start);
  if (!o.dump.empty()) qi::save_table_file(t, o.dump);
  const std::uint32_t front = o.front ? o.front : t.n_max();
  if (front > t.n_max()) qi::fail(qi::ErrorCode::out_of_range, "front beyond the table's n_max");
  const qi::RedundancyReport r = qi::excess_profile(t, front);
  std::cout << std::fixed << std::setprecision(6) << "table     n_max=" << t.n_max() << " g=" << t.precision().bits()
            << " entries=" << qi::QuantTable::entry_count(t.n_max()) << " shift exceptions=" << t.shift_exceptions().size()
            << (o.load.empty() ? " built in " : " loaded in ") << build << " s\n"
            << "front     n=" << front << "\n"
            << "max excess " << r.max_excess_bits << " bits\n"
            << "avg excess " << r.avg_excess_bits << " bits\n"
            << "bound      " << r.theoretical_bound_bits << " bits (n*log2(e)/2^(g-1))\n"
            << "g needed for 1 bit at this n: " << qi::min_precision(front, 1.0) << "\n";
  return 0;
}

struct BenchOptions {
  unsigned trials = 20;
  std::uint64_t seed = 1;
  std::uint32_t block_size = 4096;
  unsigned g = 32;
  std::string csv;
  bool csv_times = false;
  bool quiet = false;
};

int run_bench(const BenchOptions& o) {
  qi::bench::BenchConfig cfg;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.block_size = o.block_size;
  cfg.g = o.g;
  const qi::QuantTable t = qi::build_table(cfg.block_size, qi::Precision(cfg.g));
  const qi::bench::BenchReport r = qi::bench::run_bench(cfg, t);
  if (!o.quiet) qi::bench::print_table(std::cout, r);
  if (!o.csv.empty()) {
    std::ostringstream csv;
    qi::bench::write_csv(csv, r, o.csv_times);
    const std::string text = csv.str();
    write_output(o.csv, std::vector<std::uint8_t>(text.begin(), text.end()));
  }
  return 0;
}

// Quick versions of the invariant suites.
int run_selftest() {
  int failures = 0;
  auto check = [&](const char* name, auto&& fn) {
    bool ok = false;
    std::string why;
    const auto start = std::chrono::steady_clock::now();
    try {
      ok = fn();
    } catch (const std::exception& e) {
      why = e.what();
    }
    failures += ok ? 0 : 1;
    std::cout << (ok ? "PASS  " : "FAIL  ") << name << std::fixed << std::setprecision(2) << "  [" << seconds_since(start)
              << " s]" << (why.empty() ? "" : "  (" + why + ")") << std::endl;
  };
  const std::vector<std::uint8_t> fig{0, 0, 1, 0, 1, 0, 0, 1};

  check("rank of 00101001 is 43", [&] {
    const qi::QuantTable t = qi::build_table(8, qi::Precision(32));
    return qi::oracle::rank_exact(fig) == 43 && qi::encode_block(fig, t).index.to_big() == 43;
  });
  check("injective and invertible for n <= 12, g = 4..8", [] {
    for (unsigned g = 4; g <= 8; ++g) {
      const qi::QuantTable t = qi::build_table(12, qi::Precision(g));
      for (unsigned n = 0; n <= 12; ++n) {
        std::vector<std::vector<qi::BigInt>> seen(n + 1);
        for (std::uint32_t p = 0; p < (1u << n); ++p) {
          std::vector<std::uint8_t> bits(n);
          for (unsigned i = 0; i < n; ++i) bits[i] = (p >> i) & 1u;
          const qi::BlockCode c = qi::encode_block(bits, t);
          if (qi::decode_block(c, t) != bits) return false;
          seen[c.k].push_back(c.index.to_big());
        }
        for (auto& v : seen) {
          std::sort(v.begin(), v.end());
          if (std::adjacent_find(v.begin(), v.end()) != v.end()) return false;
        }
      }
    }
    return true;
  });
  check("table dominates binomials, n <= 512, g = 8, 16, 32", [] {
    for (unsigned g : {8u, 16u, 32u}) {
      const qi::QuantTable t = qi::build_table(512, qi::Precision(g));
      for (std::uint32_t n = 0; n <= 512; ++n) {
        const auto row = qi::oracle::shared_counts().row(n);
        for (std::uint32_t k = 0; k <= n; ++k) {
          const qi::SWInt q = t.at(n, k);
          if (!qi::is_well_formed(q, t.precision()) || qi::sw_value(q) < row[k]) return false;
          if (k > 0 && k < n && q != qi::sw_add_ceil(t.at(n - 1, k - 1), t.at(n - 1, k), t.precision())) return false;
        }
      }
    }
    return true;
  });
  check("container round trip, 200 random inputs", [] {
    std::mt19937_64 rng(1);
    const qi::QuantTable t = qi::build_table(4096, qi::Precision(32));
    qi::TableCache cache;
    for (int i = 0; i < 200; ++i) {
      const std::uint64_t n = rng() % 50000;
      const auto bits = qi::bench::random_bits(rng, n, n ? rng() % (n + 1) : 0);
      if (qi::read_stream(qi::encode_bits(bits, {4096, qi::Precision(32)}, t).bytes, cache).symbols != bits) return false;
    }
    return true;
  });
  check("byte container round trip", [] {
    std::mt19937_64 rng(2);
    const qi::QuantTable t = qi::build_table(4096, qi::Precision(32));
    std::vector<std::uint8_t> data(20000);
    for (auto& b : data) b = static_cast<std::uint8_t>(rng() % 7 * 31);
    return qi::read_stream(qi::encode_bytes(data, {4096, qi::Precision(32)}, t).bytes).symbols == data;
  });
  check("permutations of 7 round trip at g = 6", [] {
    const qi::PermTable pt(7, qi::Precision(6));
    std::vector<std::uint32_t> perm{0, 1, 2, 3, 4, 5, 6};
    do {
      if (qi::perm_unrank(qi::perm_rank(perm, pt), 7, pt) != perm) return false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return true;
  });
  check("corrupted streams are rejected", [] {
    std::mt19937_64 rng(3);
    const qi::QuantTable t = qi::build_table(1024, qi::Precision(16));
    const auto bits = qi::bench::random_bits(rng, 5000, 300);
    const auto good = qi::encode_bits(bits, {1024, qi::Precision(16)}, t).bytes;
    qi::TableCache cache;
    for (int i = 0; i < 200; ++i) {
      auto bad = good;
      bad[rng() % bad.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
      try {
        if (qi::read_stream(bad, cache).symbols != bits) return false;
      } catch (const qi::Error&) {
      }
    }
    return true;
  });
  std::cout << (failures ? "selftest failed" : "selftest passed") << "\n";
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized-indexing entropy coder"};
  app.require_subcommand(1);

  EncodeOptions enc;
  auto* encode = app.add_subcommand("encode", "Compress a file into a QIX1 stream");
  encode->add_option("--in", enc.in, "Input file, - for stdin")->capture_default_str();
  encode->add_option("--out", enc.out, "Output file, - for stdout")->capture_default_str();
  encode->add_option("--block-size", enc.block_size, "Symbols per block")->capture_default_str()->check(CLI::Range(1u, 65535u));
  encode->add_option("-g,--g,--precision", enc.g, "Mantissa bits")->capture_default_str()->check(CLI::Range(4u, 32u));
  encode->add_option("--alphabet", enc.alphabet, "bin: bits, MSB first per byte; byte: 256 symbols")
      ->capture_default_str()
      ->check(CLI::IsMember({"bin", "byte"}));

  std::string dec_in = "-", dec_out = "-";
  auto* decode = app.add_subcommand("decode", "Expand a QIX1 stream");
  decode->add_option("--in", dec_in, "Input stream, - for stdin")->capture_default_str();
  decode->add_option("--out", dec_out, "Output file, - for stdout")->capture_default_str();

  TableOptions tab;
  auto* tables = app.add_subcommand("tables", "Build or load a table and print its redundancy profile");
  tables->add_option("-n,--n", tab.n, "Last front of the table")->capture_default_str()->check(CLI::Range(1u, 65535u));
  tables->add_option("-g,--g,--precision", tab.g, "Mantissa bits")->capture_default_str()->check(CLI::Range(4u, 32u));
  tables->add_option("--front", tab.front, "Front to profile (default: last)");
  tables->add_option("--dump", tab.dump, "Write the table to a file");
  tables->add_option("--load", tab.load, "Read a table file instead of building")->check(CLI::ExistingFile);

  BenchOptions ben;
  auto* bench = app.add_subcommand("bench", "Compare against a static range coder");
  bench->add_option("--trials", ben.trials, "Inputs per cell")->capture_default_str()->check(CLI::Range(1u, 100000u));
  bench->add_option("--seed", ben.seed, "Generator seed")->capture_default_str();
  bench->add_option("--block-size", ben.block_size, "Symbols per block")->capture_default_str()->check(CLI::Range(1u, 8192u));
  bench->add_option("-g,--g,--precision", ben.g, "Mantissa bits")->capture_default_str()->check(CLI::Range(4u, 32u));
  bench->add_option("--out", ben.csv, "Write CSV to this file (- for stdout)");
  bench->add_flag("--csv-times", ben.csv_times, "Include timing columns in the CSV");
  bench->add_flag("-q,--quiet", ben.quiet, "Skip the text table");

  auto* selftest = app.add_subcommand("selftest", "Run quick invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*encode) return run_encode(enc);
    if (*decode) return run_decode(dec_in, dec_out);
    if (*tables) return run_tables(tab);
    if (*bench) return run_bench(ben);
    if (*selftest) return run_selftest();
  } catch (const qi::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
