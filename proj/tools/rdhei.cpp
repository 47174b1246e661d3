// Batch CLI for the RDHEI codec: content-owner (reserve-encrypt), data-hider
// (embed), receiver (extract / recover), plus analysis and corpus benchmarks.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "rdhei/rdhei.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_key_source(const std::string& flagValue, const std::string& fileValue,
                            const char* envName) {
    if (!flagValue.empty())
        return flagValue;
    if (!fileValue.empty()) {
        std::ifstream in(fileValue);
        if (!in)
            rdhei::fail("IoError", "cannot open key file " + fileValue);
        std::string tok;
        in >> tok;
        return tok;
    }
    if (const char* env = std::getenv(envName))
        return env;
    rdhei::fail("MalformedKey",
                std::string("no key given: use the flag, a key file, or $") + envName);
}

std::vector<std::uint8_t> read_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        rdhei::fail("IoError", "cannot open " + path);
    return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
}

void write_binary(const std::string& path, const std::vector<std::uint8_t>& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        rdhei::fail("IoError", "cannot create " + path);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out)
        rdhei::fail("IoError", "write failed for " + path);
}

// CSV schema (frozen, one row per image):
// name,width,height,overflow_pct,plane1_net_bits..plane8_net_bits,er_bpp,mse
const char* kCsvHeader =
    "name,width,height,overflow_pct,plane1_net_bits,plane2_net_bits,plane3_net_bits,"
    "plane4_net_bits,plane5_net_bits,plane6_net_bits,plane7_net_bits,plane8_net_bits,"
    "er_bpp,mse\n";

std::string csv_row(const std::string& name, const rdhei::CapacityReport& cap,
                    const std::string& mseField) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%.6f", name.c_str(), cap.width, cap.height,
                  cap.overflowFraction * 100.0);
    std::string row(buf);
    for (const auto& pc : cap.plane)
        row += "," + std::to_string(pc.netBits);
    std::snprintf(buf, sizeof buf, ",%.6f,%s\n", cap.er, mseField.c_str());
    row += buf;
    return row;
}

void print_capacity(const rdhei::CapacityReport& cap) {
    std::printf("  plane   role        UB     NUB  embNUB   aux bits    net bits\n");
    for (int p = 0; p < 8; ++p) {
        const auto& pc = cap.plane[p];
        std::printf("  %5d   %-9s %6d  %6d  %6d  %9llu  %10llu\n", p + 1,
                    pc.embeddable ? "embeds" : "raw", pc.ubCount, pc.nubCount, pc.embeddableNubs,
                    static_cast<unsigned long long>(pc.auxBits),
                    static_cast<unsigned long long>(pc.netBits));
    }
    std::printf("  overflow pixels: %zu (%.4f%%)\n", cap.overflowCount,
                cap.overflowFraction * 100.0);
    std::printf("  net capacity: %llu bits (max payload %llu bits), ER %.4f bpp\n",
                static_cast<unsigned long long>(cap.totalNetBits),
                static_cast<unsigned long long>(cap.maxPayloadBits), cap.er);
}

int cmd_reserve_encrypt(const std::string& input, const std::string& output,
                        const std::string& keyHex, const std::string& csvPath) {
    const rdhei::RasterImage img = rdhei::load_pgm(input);
    const rdhei::KeyMaterial ke = rdhei::parse_key_hex(keyHex);
    const rdhei::ReservationResult res = rdhei::reserve_and_encrypt(img, ke);
    rdhei::store_pgm(rdhei::merge_planes(res.encrypted), output);
    std::printf("%s -> %s\n", input.c_str(), output.c_str());
    print_capacity(res.report);
    if (!csvPath.empty()) {
        std::ofstream csv(csvPath, std::ios::trunc);
        csv << kCsvHeader << csv_row(fs::path(input).filename().string(), res.report, "");
    }
    return 0;
}

int cmd_embed(const std::string& input, const std::string& output, const std::string& payloadPath,
              const std::string& keyHex) {
    const rdhei::RasterImage img = rdhei::load_pgm(input);
    const rdhei::KeyMaterial kd = rdhei::parse_key_hex(keyHex);
    const std::vector<std::uint8_t> payload = read_binary(payloadPath);
    const rdhei::PlaneSet marked = rdhei::embed(rdhei::split_planes(img), payload, kd);
    rdhei::store_pgm(rdhei::merge_planes(marked), output);
    std::printf("embedded %zu bytes into %s\n", payload.size(), output.c_str());
    return 0;
}

int cmd_extract(const std::string& input, const std::string& output, const std::string& keyHex) {
    const rdhei::RasterImage img = rdhei::load_pgm(input);
    const rdhei::KeyMaterial kd = rdhei::parse_key_hex(keyHex);
    const std::vector<std::uint8_t> payload = rdhei::extract(rdhei::split_planes(img), kd);
    write_binary(output, payload);
    std::printf("extracted %zu bytes to %s\n", payload.size(), output.c_str());
    return 0;
}

int cmd_recover(const std::string& input, const std::string& output, const std::string& keyHex) {
    const rdhei::RasterImage img = rdhei::load_pgm(input);
    const rdhei::KeyMaterial ke = rdhei::parse_key_hex(keyHex);
    const rdhei::RasterImage recovered = rdhei::recover(rdhei::split_planes(img), ke);
    rdhei::store_pgm(recovered, output);
    std::printf("recovered image written to %s\n", output.c_str());
    return 0;
}

int cmd_analyze(const std::string& input, const std::string& comparePath,
                const std::string& csvPath) {
    const rdhei::RasterImage img = rdhei::load_pgm(input);
    const rdhei::HistogramReport hist = rdhei::histogram_and_entropy(img);
    const rdhei::CapacityReport cap = rdhei::measure_er(img);

    std::printf("%s: %dx%d, entropy %.4f bits/pixel\n", input.c_str(), img.width, img.height,
                hist.entropyBits);
    if (cap.ok)
        print_capacity(cap);
    else
        std::printf("  capacity: unavailable (%s)\n", cap.diagnostic.c_str());

    const rdhei::PlaneSet planes = rdhei::split_planes(img);
    std::printf("  ones-per-4x4-block counts (planes 1-4):\n  ones");
    for (int p = 0; p < 4; ++p)
        std::printf("     plane%d", p + 1);
    std::printf("\n");
    std::array<std::array<std::uint64_t, 17>, 4> tables;
    for (int p = 0; p < 4; ++p)
        tables[p] = rdhei::ones_per_block_histogram(planes.plane[p], img.width, img.height);
    for (int ones = 0; ones <= 16; ++ones) {
        std::printf("  %4d", ones);
        for (int p = 0; p < 4; ++p)
            std::printf(" %10llu", static_cast<unsigned long long>(tables[p][ones]));
        std::printf("\n");
    }

    std::string mseField;
    if (!comparePath.empty()) {
        const rdhei::RasterImage other = rdhei::load_pgm(comparePath);
        const double m = rdhei::mse(img, other);
        mseField = std::to_string(m);
        std::printf("  vs %s: MSE %.6f, entropy %.4f\n", comparePath.c_str(), m,
                    rdhei::histogram_and_entropy(other).entropyBits);
        const rdhei::PlaneSet otherPlanes = rdhei::split_planes(other);
        for (int p = 0; p < 4; ++p) {
            const auto h2 =
                rdhei::ones_per_block_histogram(otherPlanes.plane[p], other.width, other.height);
            std::printf("  plane %d ones-histogram chi^2 p-value: %.4f\n", p + 1,
                        rdhei::chi2_homogeneity_pvalue(tables[p], h2));
        }
    }

    if (!csvPath.empty()) {
        std::ofstream csv(csvPath, std::ios::trunc);
        csv << kCsvHeader << csv_row(fs::path(input).filename().string(), cap, mseField);
    }
    return 0;
}

int cmd_bench(const std::string& dir, const std::string& keyEHex, const std::string& keyDHex,
              const std::string& outPath, unsigned jobs) {
    const rdhei::KeyMaterial ke = rdhei::parse_key_hex(keyEHex);
    const rdhei::KeyMaterial kd = rdhei::parse_key_hex(keyDHex);

    std::vector<fs::path> files;
    if (!fs::is_directory(dir))
        rdhei::fail("IoError", dir + " is not a directory");
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".pgm")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<std::string> rows(files.size());
    std::vector<double> ers(files.size(), 0.0);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> okCount{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= files.size())
                return;
            const std::string name = files[i].filename().string();
            try {
                const rdhei::RasterImage img = rdhei::load_pgm(files[i].string());
                const rdhei::CapacityReport cap = rdhei::measure_er(img);
                if (!cap.ok) {
                    rows[i] = csv_row(name, cap, "");
                    continue;
                }
                const std::vector<std::uint8_t> payload(cap.maxPayloadBits / 8, 0);
                const rdhei::CycleReport rep = rdhei::full_cycle_check(img, ke, kd, payload);
                char mseBuf[32];
                std::snprintf(mseBuf, sizeof mseBuf, "%.6f", rep.mseValue);
                rows[i] = csv_row(name, cap, mseBuf);
                ers[i] = cap.er;
                if (rep.ok)
                    okCount.fetch_add(1);
            } catch (const rdhei::Error& e) {
                rows[i] = name + ",,,,,,,,,,,,," + std::string(e.name()) + "\n";
            }
        }
    };

    if (jobs == 0)
        jobs = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();

    std::ofstream csv(outPath, std::ios::trunc);
    if (!csv)
        rdhei::fail("IoError", "cannot create " + outPath);
    csv << kCsvHeader;
    double sum = 0.0;
    std::size_t counted = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        csv << rows[i];
        if (ers[i] > 0) {
            sum += ers[i];
            ++counted;
        }
    }
    std::printf("%zu images, %zu full cycles ok, mean ER %.4f bpp -> %s\n", files.size(),
                okCount.load(), counted ? sum / static_cast<double>(counted) : 0.0,
                outPath.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reversible data hiding in encrypted images (RRBE codec)"};
    app.require_subcommand(1);

    std::string input, output, keyFlag, keyFile, payloadPath, comparePath, csvPath, dir;
    std::string keyDFlag, keyDFile;
    unsigned jobs = 0;

    auto* reserve = app.add_subcommand("reserve-encrypt",
                                       "Reserve embeddable room and encrypt (content-owner)");
    reserve->add_option("input", input, "input PGM image")->required();
    reserve->add_option("-o,--output", output, "encrypted PGM")->required();
    reserve->add_option("--key-e", keyFlag, "encryption key Ke (64 hex chars)");
    reserve->add_option("--key-e-file", keyFile, "file holding Ke");
    reserve->add_option("--csv", csvPath, "write the capacity report as CSV");

    auto* embedCmd = app.add_subcommand("embed", "Embed a payload file (data-hider)");
    embedCmd->add_option("input", input, "encrypted PGM")->required();
    embedCmd->add_option("-o,--output", output, "marked PGM")->required();
    embedCmd->add_option("--payload", payloadPath, "payload file")->required();
    embedCmd->add_option("--key-d", keyDFlag, "data-hiding key Kd (64 hex chars)");
    embedCmd->add_option("--key-d-file", keyDFile, "file holding Kd");

    auto* extractCmd = app.add_subcommand("extract", "Extract the payload (receiver with Kd)");
    extractCmd->add_option("input", input, "marked PGM")->required();
    extractCmd->add_option("-o,--output", output, "payload output file")->required();
    extractCmd->add_option("--key-d", keyDFlag, "data-hiding key Kd");
    extractCmd->add_option("--key-d-file", keyDFile, "file holding Kd");

    auto* recoverCmd = app.add_subcommand("recover", "Recover the image (receiver with Ke)");
    recoverCmd->add_option("input", input, "marked or encrypted PGM")->required();
    recoverCmd->add_option("-o,--output", output, "recovered PGM")->required();
    recoverCmd->add_option("--key-e", keyFlag, "encryption key Ke");
    recoverCmd->add_option("--key-e-file", keyFile, "file holding Ke");

    auto* analyzeCmd = app.add_subcommand("analyze", "Capacity, histogram and entropy report");
    analyzeCmd->add_option("input", input, "PGM image")->required();
    analyzeCmd->add_option("--compare", comparePath, "second image for MSE / chi^2 comparison");
    analyzeCmd->add_option("--csv", csvPath, "write the report row as CSV");

    auto* benchCmd = app.add_subcommand("bench", "Run the full cycle over a corpus directory");
    benchCmd->add_option("--dir", dir, "directory of PGM images")->required();
    benchCmd->add_option("--key-e", keyFlag, "encryption key Ke");
    benchCmd->add_option("--key-e-file", keyFile, "file holding Ke");
    benchCmd->add_option("--key-d", keyDFlag, "data-hiding key Kd (defaults to $RDHEI_KEY_D)");
    benchCmd->add_option("--key-d-file", keyDFile, "file holding Kd");
    benchCmd->add_option("--out", csvPath, "output CSV")->required();
    benchCmd->add_option("--jobs", jobs, "parallel workers (default: hardware)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (reserve->parsed())
            return cmd_reserve_encrypt(input, output,
                                       read_key_source(keyFlag, keyFile, "RDHEI_KEY_E"), csvPath);
        if (embedCmd->parsed())
            return cmd_embed(input, output, payloadPath,
                             read_key_source(keyDFlag, keyDFile, "RDHEI_KEY_D"));
        if (extractCmd->parsed())
            return cmd_extract(input, output, read_key_source(keyDFlag, keyDFile, "RDHEI_KEY_D"));
        if (recoverCmd->parsed())
            return cmd_recover(input, output, read_key_source(keyFlag, keyFile, "RDHEI_KEY_E"));
        if (analyzeCmd->parsed())
            return cmd_analyze(input, comparePath, csvPath);
        if (benchCmd->parsed())
            return cmd_bench(dir, read_key_source(keyFlag, keyFile, "RDHEI_KEY_E"),
                             read_key_source(keyDFlag, keyDFile, "RDHEI_KEY_D"), csvPath, jobs);
    } catch (const rdhei::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: Internal: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
