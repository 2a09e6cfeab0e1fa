#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "scrawl/rng.hpp"
#include "scrawl/sentiment.hpp"
#include "scrawl/stroke_font.hpp"

namespace scrawl {

struct PageConfig {
    double width = 800.0;    // px; height grows with the text
    double margin = 40.0;    // px on all sides
    double font_size = 24.0; // px per em
    double line_height = 36.0;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct RenderStroke {
    std::vector<Vec2> points;
    size_t line = 0; // text line the stroke belongs to, drives the wobble phase
};

struct StrokeDocument {
    std::vector<RenderStroke> strokes;
    double width = 0.0;
    double height = 0.0;
    size_t lines = 0;
    uint64_t jitter_seed = 0;
    JitterParams jitter; // zeroed until apply_jitter runs
};

namespace detail {

// Byte length of the UTF-8 sequence starting at s[i]; invalid leads count 1.
inline size_t utf8_seq_len(std::string_view s, size_t i) {
    const auto b = static_cast<unsigned char>(s[i]);
    size_t len = 1;
    if ((b & 0xE0) == 0xC0) len = 2;
    else if ((b & 0xF0) == 0xE0) len = 3;
    else if ((b & 0xF8) == 0xF0) len = 4;
    if (i + len > s.size()) len = 1;
    return len;
}

} // namespace detail

// Places text on the page: glyph outlines scaled to font_size, greedy word
// wrap at the right margin, '\n' forcing a line break. Non-ASCII code points
// take the font's fallback glyph. Baseline of line k sits at
// margin + ascent + k*line_height, with y flipped from the font's y-up frame.
inline StrokeDocument layout_text(std::string_view text, const StrokeFont& font,
                                  const PageConfig& page = {}) {
    const double scale = page.font_size / kFontUnitsPerEm;
    const double ascent = 0.75 * page.font_size;
    const double right_edge = page.width - page.margin;

    StrokeDocument doc;
    doc.width = page.width;

    size_t line = 0;
    double cursor = page.margin;
    const double space_advance = font.glyph(' ').advance * scale;

    auto glyph_for = [&](std::string_view s, size_t i, size_t len) -> const Glyph& {
        if (len == 1 && static_cast<unsigned char>(s[i]) < 0x80) return font.glyph(s[i]);
        return font.has_fallback() ? font.fallback_glyph() : font.glyph('?');
    };

    auto emit = [&](const Glyph& g) {
        const double baseline = page.margin + ascent + static_cast<double>(line) * page.line_height;
        for (const auto& stroke : g.strokes) {
            RenderStroke rs;
            rs.line = line;
            rs.points.reserve(stroke.size());
            for (const FontPoint& p : stroke) {
                rs.points.push_back({cursor + p.x * scale, baseline - p.y * scale});
            }
            doc.strokes.push_back(std::move(rs));
        }
        cursor += g.advance * scale;
    };

    size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
            cursor = page.margin;
            ++i;
            continue;
        }
        if (c == '\r') {
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t') {
            if (cursor > page.margin) cursor += space_advance; // collapse leading spaces
            ++i;
            continue;
        }

        // Measure the word starting here to decide whether it still fits.
        size_t j = i;
        double word_width = 0.0;
        while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\n' &&
               text[j] != '\r') {
            const size_t len = detail::utf8_seq_len(text, j);
            word_width += glyph_for(text, j, len).advance * scale;
            j += len;
        }
        if (cursor > page.margin && cursor + word_width > right_edge) {
            ++line;
            cursor = page.margin;
        }

        // Emit it, hard-breaking words wider than a whole line.
        while (i < j) {
            const size_t len = detail::utf8_seq_len(text, i);
            const Glyph& g = glyph_for(text, i, len);
            if (cursor > page.margin && cursor + g.advance * scale > right_edge) {
                ++line;
                cursor = page.margin;
            }
            emit(g);
            i += len;
        }
    }

    doc.lines = line + 1;
    doc.height = 2.0 * page.margin + static_cast<double>(doc.lines) * page.line_height;
    return doc;
}

// Shakes the page: each point gets Gaussian offsets scaled by sigma in both
// axes plus a sine wobble on y that runs along the line of writing
// (wavelength 120 px, one random phase per text line). Deterministic for a
// fixed seed. With sigma and wobble both zero every point is bit-identical
// to the input. The bias parameter is not painted; it rides along as
// metadata recording how hard the writer was steadying the pen.
inline StrokeDocument apply_jitter(const StrokeDocument& doc, const JitterParams& params,
                                   uint64_t seed) {
    constexpr double kWavelength = 120.0;
    constexpr double kTau = 6.283185307179586;

    Rng rng(seed);
    std::vector<double> phase(doc.lines == 0 ? 1 : doc.lines);
    for (double& p : phase) p = rng.uniform() * kTau;

    StrokeDocument out = doc;
    out.jitter_seed = seed;
    out.jitter = params;
    for (RenderStroke& stroke : out.strokes) {
        const double ph = phase[stroke.line < phase.size() ? stroke.line : 0];
        for (Vec2& p : stroke.points) {
            const double dx = rng.gaussian() * params.sigma;
            const double dy = rng.gaussian() * params.sigma;
            const double wobble = params.wobble_amp * std::sin(kTau * p.x / kWavelength + ph);
            p.x += dx;
            p.y += dy + wobble;
        }
    }
    return out;
}

namespace detail {

inline void append_coord(std::string& out, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    out += buf;
}

} // namespace detail

// Serializes the document as a standalone SVG. The leading comment records
// the jitter seed and parameters so a page can be re-produced or un-shaken.
inline std::string render_svg(const StrokeDocument& doc) {
    std::string svg;
    svg.reserve(256 + doc.strokes.size() * 96);
    char head[256];
    std::snprintf(head, sizeof head,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                  "viewBox=\"0 0 %.0f %.0f\">\n",
                  doc.width, doc.height, doc.width, doc.height);
    svg += head;
    char meta[256];
    std::snprintf(meta, sizeof meta,
                  "<!-- seed=%llu sigma=%.4f wobble=%.4f bias=%.4f -->\n",
                  static_cast<unsigned long long>(doc.jitter_seed), doc.jitter.sigma,
                  doc.jitter.wobble_amp, doc.jitter.bias);
    svg += meta;
    char rect[160];
    std::snprintf(rect, sizeof rect, "<rect width=\"%.0f\" height=\"%.0f\" fill=\"#fffdf5\"/>\n",
                  doc.width, doc.height);
    svg += rect;
    for (const RenderStroke& stroke : doc.strokes) {
        svg += "<polyline fill=\"none\" stroke=\"#20222e\" stroke-width=\"1.3\" "
               "stroke-linecap=\"round\" stroke-linejoin=\"round\" points=\"";
        for (size_t i = 0; i < stroke.points.size(); ++i) {
            if (i) svg += ' ';
            detail::append_coord(svg, stroke.points[i].x);
            svg += ',';
            detail::append_coord(svg, stroke.points[i].y);
        }
        svg += "\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

// Text straight to shaky SVG: layout, sentiment-strength jitter, serialize.
inline std::string handwrite_svg(std::string_view text, const StrokeFont& font, double strength,
                                 uint64_t seed, const PageConfig& page = {},
                                 const JitterConfig& jitter_config = {}) {
    const StrokeDocument flat = layout_text(text, font, page);
    const StrokeDocument shaken = apply_jitter(flat, shakiness(strength, jitter_config), seed);
    return render_svg(shaken);
}

} // namespace scrawl
