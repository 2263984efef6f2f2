#pragma once

#include "seamcut/core/obj_io.hpp"

#include <cstdint>
#include <cstring>

namespace seamcut {

namespace detail {

enum class PlyType { i8, u8, i16, u16, i32, u32, f32, f64 };

inline PlyType ply_type(std::string_view t, int line) {
    if (t == "char" || t == "int8") return PlyType::i8;
    if (t == "uchar" || t == "uint8") return PlyType::u8;
    if (t == "short" || t == "int16") return PlyType::i16;
    if (t == "ushort" || t == "uint16") return PlyType::u16;
    if (t == "int" || t == "int32") return PlyType::i32;
    if (t == "uint" || t == "uint32") return PlyType::u32;
    if (t == "float" || t == "float32") return PlyType::f32;
    if (t == "double" || t == "float64") return PlyType::f64;
    throw ParseError("unknown PLY type '" + std::string(t) + "'", line);
}

inline size_t ply_type_size(PlyType t) {
    switch (t) {
        case PlyType::i8:
        case PlyType::u8: return 1;
        case PlyType::i16:
        case PlyType::u16: return 2;
        case PlyType::i32:
        case PlyType::u32:
        case PlyType::f32: return 4;
        case PlyType::f64: return 8;
    }
    return 0;
}

// Little-endian scalar read; host is assumed little-endian.
inline double read_binary_scalar(const std::string& bytes, size_t& pos, PlyType t) {
    size_t n = ply_type_size(t);
    if (pos + n > bytes.size())
        throw MeshError("PLY: unexpected end of binary payload");
    const char* p = bytes.data() + pos;
    pos += n;
    auto as = [&]<typename T>(T) {
        T v;
        std::memcpy(&v, p, sizeof(T));
        return static_cast<double>(v);
    };
    switch (t) {
        case PlyType::i8: return as(int8_t{});
        case PlyType::u8: return as(uint8_t{});
        case PlyType::i16: return as(int16_t{});
        case PlyType::u16: return as(uint16_t{});
        case PlyType::i32: return as(int32_t{});
        case PlyType::u32: return as(uint32_t{});
        case PlyType::f32: return as(float{});
        case PlyType::f64: return as(double{});
    }
    return 0.0;
}

struct PlyProperty {
    std::string name;
    bool is_list = false;
    PlyType count_type = PlyType::u8;
    PlyType value_type = PlyType::f32;
};

struct PlyElement {
    std::string name;
    long count = 0;
    std::vector<PlyProperty> props;
};

}  // namespace detail

/// Parses ASCII or binary_little_endian PLY 1.0. Vertex x/y/z required;
/// per-vertex `s`,`t` UVs are picked up when present (vertex-uniform, so no
/// seams are derivable from them).
inline Mesh parse_ply(const std::string& bytes, const std::string& name = "") {
    using namespace detail;

    size_t pos = 0;
    int line = 0;
    auto next_line = [&]() -> std::string {
        size_t e = bytes.find('\n', pos);
        if (e == std::string::npos)
            throw MeshError("PLY: truncated header");
        std::string s = bytes.substr(pos, e - pos);
        if (!s.empty() && s.back() == '\r')
            s.pop_back();
        pos = e + 1;
        ++line;
        return s;
    };

    if (next_line() != "ply")
        throw ParseError("missing 'ply' magic", line);
    bool binary = false;
    std::vector<PlyElement> elements;
    for (;;) {
        std::string l = next_line();
        auto toks = split_ws(l);
        if (toks.empty())
            continue;
        if (toks[0] == "comment")
            continue;
        if (toks[0] == "format") {
            if (toks.size() < 3)
                throw ParseError("malformed format line", line);
            if (toks[1] == "ascii")
                binary = false;
            else if (toks[1] == "binary_little_endian")
                binary = true;
            else
                throw ParseError("unsupported PLY format '" + std::string(toks[1]) + "'", line);
        } else if (toks[0] == "element") {
            if (toks.size() != 3)
                throw ParseError("malformed element line", line);
            PlyElement el;
            el.name = std::string(toks[1]);
            el.count = parse_int(toks[2], line);
            if (el.count == 0 && (el.name == "vertex" || el.name == "face"))
                throw ParseError("zero " + el.name + " elements", line);
            elements.push_back(el);
        } else if (toks[0] == "property") {
            if (elements.empty())
                throw ParseError("property before any element", line);
            PlyProperty p;
            if (toks.size() == 5 && toks[1] == "list") {
                p.is_list = true;
                p.count_type = ply_type(toks[2], line);
                p.value_type = ply_type(toks[3], line);
                p.name = std::string(toks[4]);
            } else if (toks.size() == 3) {
                p.value_type = ply_type(toks[1], line);
                p.name = std::string(toks[2]);
            } else {
                throw ParseError("malformed property line", line);
            }
            elements.back().props.push_back(p);
        } else if (toks[0] == "end_header") {
            break;
        } else {
            throw ParseError("unknown header keyword '" + std::string(toks[0]) + "'", line);
        }
    }

    Mesh mesh;
    mesh.name = name;
    std::vector<Vec2> vertex_uv;
    bool has_st = false;

    // ASCII token stream after the header
    std::vector<std::string> ascii_toks;
    size_t tok_idx = 0;
    if (!binary) {
        std::string_view rest = std::string_view(bytes).substr(pos);
        size_t i = 0;
        auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
        while (i < rest.size()) {
            while (i < rest.size() && is_ws(rest[i]))
                ++i;
            size_t j = i;
            while (j < rest.size() && !is_ws(rest[j]))
                ++j;
            if (j > i)
                ascii_toks.emplace_back(rest.substr(i, j - i));
            i = j;
        }
    }
    auto next_scalar = [&](PlyType t) -> double {
        if (binary)
            return read_binary_scalar(bytes, pos, t);
        if (tok_idx >= ascii_toks.size())
            throw MeshError("PLY: unexpected end of ASCII payload");
        return parse_double(ascii_toks[tok_idx++], 0);
    };

    for (const auto& el : elements) {
        if (el.name == "vertex") {
            if (el.count == 0)
                throw MeshError("PLY: zero vertices");
            int ix = -1, iy = -1, iz = -1, is = -1, it_ = -1;
            for (int i = 0; i < static_cast<int>(el.props.size()); ++i) {
                const auto& n = el.props[i].name;
                if (n == "x") ix = i;
                else if (n == "y") iy = i;
                else if (n == "z") iz = i;
                else if (n == "s" || n == "u") is = i;
                else if (n == "t" || n == "v") it_ = i;
            }
            if (ix < 0 || iy < 0 || iz < 0)
                throw MeshError("PLY: vertex element lacks x/y/z");
            has_st = is >= 0 && it_ >= 0;
            for (long v = 0; v < el.count; ++v) {
                std::vector<double> vals(el.props.size());
                for (size_t i = 0; i < el.props.size(); ++i) {
                    if (el.props[i].is_list)
                        throw MeshError("PLY: list property on vertex element unsupported");
                    vals[i] = next_scalar(el.props[i].value_type);
                }
                mesh.vertices.emplace_back(vals[ix], vals[iy], vals[iz]);
                if (has_st)
                    vertex_uv.emplace_back(vals[is], vals[it_]);
            }
        } else if (el.name == "face") {
            if (el.count == 0)
                throw MeshError("PLY: zero faces");
            for (long f = 0; f < el.count; ++f) {
                for (const auto& p : el.props) {
                    if (!p.is_list) {
                        next_scalar(p.value_type);
                        continue;
                    }
                    long n = static_cast<long>(next_scalar(p.count_type));
                    if (p.name != "vertex_indices" && p.name != "vertex_index") {
                        for (long i = 0; i < n; ++i)
                            next_scalar(p.value_type);
                        continue;
                    }
                    if (n != 3)
                        throw MeshError("PLY: face " + std::to_string(f) +
                                        " is not a triangle (" + std::to_string(n) + " corners)");
                    std::array<int, 3> tri;
                    for (int c = 0; c < 3; ++c) {
                        long idx = static_cast<long>(next_scalar(p.value_type));
                        if (idx < 0 || idx >= static_cast<long>(mesh.vertices.size()))
                            throw MeshError("PLY: face vertex index out of range");
                        tri[c] = static_cast<int>(idx);
                    }
                    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
                        throw MeshError("PLY: repeated vertex in face " + std::to_string(f));
                    mesh.faces.push_back(tri);
                }
            }
        } else {
            // skip unknown element payload
            for (long i = 0; i < el.count; ++i) {
                for (const auto& p : el.props) {
                    if (p.is_list) {
                        long n = static_cast<long>(next_scalar(p.count_type));
                        for (long k = 0; k < n; ++k)
                            next_scalar(p.value_type);
                    } else {
                        next_scalar(p.value_type);
                    }
                }
            }
        }
    }
    if (mesh.faces.empty())
        throw MeshError("PLY: no faces");
    if (has_st) {
        mesh.corner_uvs.resize(mesh.faces.size());
        for (size_t f = 0; f < mesh.faces.size(); ++f)
            for (int c = 0; c < 3; ++c)
                mesh.corner_uvs[f][c] = vertex_uv[mesh.faces[f][c]];
    }
    build_edges(mesh);
    return mesh;
}

/// ASCII PLY with per-vertex colors, used for distortion inspection dumps.
inline std::string write_ply_vertex_colors(const Mesh& mesh,
                                           const std::vector<std::array<uint8_t, 3>>& colors) {
    if (static_cast<int>(colors.size()) != mesh.vertex_count())
        throw MeshError("write_ply_vertex_colors: color count mismatch");
    std::string out = "ply\nformat ascii 1.0\n";
    out += "element vertex " + std::to_string(mesh.vertex_count()) + "\n";
    out += "property double x\nproperty double y\nproperty double z\n";
    out += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    out += "element face " + std::to_string(mesh.face_count()) + "\n";
    out += "property list uchar int vertex_indices\nend_header\n";
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const auto& p = mesh.vertices[v];
        out += detail::fmt_double(p.x()) + " " + detail::fmt_double(p.y()) + " " +
               detail::fmt_double(p.z()) + " " + std::to_string(colors[v][0]) + " " +
               std::to_string(colors[v][1]) + " " + std::to_string(colors[v][2]) + "\n";
    }
    for (const auto& tri : mesh.faces)
        out += "3 " + std::to_string(tri[0]) + " " + std::to_string(tri[1]) + " " +
               std::to_string(tri[2]) + "\n";
    return out;
}

}  // namespace seamcut
