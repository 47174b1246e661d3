#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "rdhei/analysis.hpp"
#include "rdhei/crypto.hpp"
#include "rdhei/embedding.hpp"
#include "rdhei/prediction.hpp"
#include "rdhei/wire.hpp"

namespace rdhei {

struct ReservationResult {
    PlaneSet encrypted;
    AuxBundle bundle;
    AuxLayout layout;
    CapacityReport report;
};

// Content-owner stage: PE transform, plane classification, NUBs-first
// rearrangement of the embeddable planes, aux serialization, keyed
// encryption. The layout the encryption excludes is the same object handed
// to the report, so plan and execution cannot drift apart.
inline ReservationResult reserve_and_encrypt(const RasterImage& img, const KeyMaterial& ke) {
    validate_dimensions(img.width, img.height);
    const PeImage pe = compute_pe(img);
    PlaneSet planes = pe_to_planes(pe);

    std::array<BlockModel, 8> models;
    for (int p = 0; p < 8; ++p)
        models[p] = classify_blocks(planes.plane[p], img.width, img.height, p == 0);

    std::array<std::uint8_t, 16> headerBits{};
    const int rb = reserved_block_index(img.width, img.height);
    for (int cell = 0; cell < kBlockCells; ++cell)
        headerBits[cell] = planes.plane[0][block_cell_index(img.width, rb, cell)];

    AuxPlan plan = plan_layout(models, pe.overflow, headerBits, img.width, img.height);

    for (int p = 0; p < 8; ++p)
        if (plan.bundle.plane_flagged(p))
            planes.plane[p] = rearrange(planes.plane[p], img.width, models[p]);

    const PlaneSet withAux = write_aux(planes, plan.bundle, plan.layout);

    ReservationResult r;
    r.encrypted = encrypt_planes(withAux, ke, plan.layout);
    r.report = build_capacity_report(models, plan.layout, pe.overflow, img.width, img.height);
    r.bundle = std::move(plan.bundle);
    r.layout = std::move(plan.layout);
    return r;
}

struct CycleReport {
    bool extractedMatches = false;
    bool recoveredMatches = false;
    bool ok = false;
    std::uint64_t payloadBits = 0;
    double er = 0.0;
    double mseValue = 0.0;
    double millisReserve = 0.0;
    double millisEmbed = 0.0;
    double millisExtract = 0.0;
    double millisRecover = 0.0;
};

// End-to-end exercise of all three actors, going through the composed image
// form between every actor boundary (exactly what the PGM files carry).
inline CycleReport full_cycle_check(const RasterImage& img, const KeyMaterial& ke,
                                    const KeyMaterial& kd,
                                    const std::vector<std::uint8_t>& payload) {
    using clock = std::chrono::steady_clock;
    auto ms = [](clock::time_point a, clock::time_point b) {
        return std::chrono::duration<double, std::milli>(b - a).count();
    };
    CycleReport rep;

    const auto t0 = clock::now();
    const ReservationResult res = reserve_and_encrypt(img, ke);
    const RasterImage encryptedImg = merge_planes(res.encrypted);
    const auto t1 = clock::now();

    const PlaneSet marked = embed(split_planes(encryptedImg), payload, kd);
    const RasterImage markedImg = merge_planes(marked);
    const auto t2 = clock::now();

    const std::vector<std::uint8_t> extracted = extract(split_planes(markedImg), kd);
    const auto t3 = clock::now();

    const RasterImage recovered = recover(split_planes(markedImg), ke);
    const auto t4 = clock::now();

    rep.extractedMatches = extracted == payload;
    rep.mseValue = mse(recovered, img);
    rep.recoveredMatches = recovered == img;
    rep.ok = rep.extractedMatches && rep.recoveredMatches;
    rep.payloadBits = static_cast<std::uint64_t>(payload.size()) * 8;
    rep.er = static_cast<double>(rep.payloadBits) / (static_cast<double>(img.width) * img.height);
    rep.millisReserve = ms(t0, t1);
    rep.millisEmbed = ms(t1, t2);
    rep.millisExtract = ms(t2, t3);
    rep.millisRecover = ms(t3, t4);
    return rep;
}

} // namespace rdhei
