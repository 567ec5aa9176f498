#include "facsca/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "facsca/error.hpp"

namespace facsca::features::model_io {

namespace {

class Writer {
public:
    explicit Writer(const std::string& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw Error(errc::io, "cannot write model file: " + path);
    }

    void u8(uint8_t v) { out_.put(static_cast<char>(v)); }

    void u32(uint32_t v) {
        char bytes[4];
        for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out_.write(bytes, 4);
    }

    void f64(double v) {
        const uint64_t bits = std::bit_cast<uint64_t>(v);
        char bytes[8];
        for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
        out_.write(bytes, 8);
    }

    void str(const std::string& s) {
        u32(static_cast<uint32_t>(s.size()));
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }

    void matrix(const Eigen::MatrixXd& m) {
        u32(static_cast<uint32_t>(m.rows()));
        u32(static_cast<uint32_t>(m.cols()));
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) f64(m(r, c));
    }

    void vector(const Eigen::VectorXd& v) {
        u32(static_cast<uint32_t>(v.size()));
        for (Eigen::Index i = 0; i < v.size(); ++i) f64(v(i));
    }

    void finish() {
        out_.flush();
        if (!out_) throw Error(errc::io, "short write: " + path_);
    }

private:
    std::string path_;
    std::ofstream out_;
};

class Reader {
public:
    explicit Reader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
        if (!in_) throw Error(errc::io, "cannot open model file: " + path);
    }

    uint8_t u8() {
        const int c = in_.get();
        if (c == EOF) fail("unexpected end of file");
        return static_cast<uint8_t>(c);
    }

    uint32_t u32() {
        char bytes[4];
        in_.read(bytes, 4);
        if (in_.gcount() != 4) fail("unexpected end of file");
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<uint8_t>(bytes[i])) << (8 * i);
        return v;
    }

    double f64() {
        char bytes[8];
        in_.read(bytes, 8);
        if (in_.gcount() != 8) fail("unexpected end of file");
        uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(static_cast<uint8_t>(bytes[i])) << (8 * i);
        return std::bit_cast<double>(bits);
    }

    std::string str() {
        const uint32_t n = u32();
        std::string s(n, '\0');
        in_.read(s.data(), n);
        if (static_cast<uint32_t>(in_.gcount()) != n) fail("unexpected end of file");
        return s;
    }

    Eigen::MatrixXd matrix() {
        const uint32_t rows = u32();
        const uint32_t cols = u32();
        Eigen::MatrixXd m(rows, cols);
        for (uint32_t r = 0; r < rows; ++r)
            for (uint32_t c = 0; c < cols; ++c) m(r, c) = f64();
        return m;
    }

    Eigen::VectorXd vector() {
        const uint32_t n = u32();
        Eigen::VectorXd v(n);
        for (uint32_t i = 0; i < n; ++i) v(i) = f64();
        return v;
    }

    void expect_header(Kind kind) {
        char magic[4];
        in_.read(magic, 4);
        if (in_.gcount() != 4 || std::memcmp(magic, "PIFE", 4) != 0)
            fail("bad magic (not a PIFE model file)");
        const uint8_t version = u8();
        if (version > kVersion)
            fail("file version " + std::to_string(version) + " is newer than supported " +
                 std::to_string(kVersion));
        const uint8_t k = u8();
        if (k != static_cast<uint8_t>(kind))
            fail("model kind " + std::to_string(k) + ", expected " +
                 std::to_string(static_cast<uint8_t>(kind)));
    }

    [[noreturn]] void fail(const std::string& why) {
        throw Error(errc::integrity, path_ + ": " + why);
    }

private:
    std::string path_;
    std::ifstream in_;
};

void write_header(Writer& w, Kind kind) {
    const char magic[4] = {'P', 'I', 'F', 'E'};
    for (char c : magic) w.u8(static_cast<uint8_t>(c));
    w.u8(kVersion);
    w.u8(static_cast<uint8_t>(kind));
}

void write_2dpca_body(Writer& w, const TwoDPcaModel& model) {
    w.matrix(model.mean_image);
    w.matrix(model.projection_axes);
}

TwoDPcaModel read_2dpca_body(Reader& r) {
    TwoDPcaModel model;
    model.mean_image = r.matrix();
    model.projection_axes = r.matrix();
    return model;
}

} // namespace

void save_eigen(const EigenModel& model, const std::string& path) {
    Writer w(path);
    write_header(w, Kind::Eigen);
    w.u32(static_cast<uint32_t>(model.chip_width));
    w.u32(static_cast<uint32_t>(model.chip_height));
    w.vector(model.mean);
    w.vector(model.eigenvalues);
    w.matrix(model.basis);
    w.matrix(model.gallery);
    w.u32(static_cast<uint32_t>(model.identities.size()));
    for (const auto& id : model.identities) w.str(id);
    w.f64(model.phi);
    w.f64(model.tau);
    w.finish();
}

EigenModel load_eigen(const std::string& path) {
    Reader r(path);
    r.expect_header(Kind::Eigen);
    EigenModel model;
    model.chip_width = static_cast<int>(r.u32());
    model.chip_height = static_cast<int>(r.u32());
    model.mean = r.vector();
    model.eigenvalues = r.vector();
    model.basis = r.matrix();
    model.gallery = r.matrix();
    const uint32_t n = r.u32();
    for (uint32_t i = 0; i < n; ++i) model.identities.push_back(r.str());
    model.phi = r.f64();
    model.tau = r.f64();
    return model;
}

void save_2dpca(const TwoDPcaModel& model, const std::string& path) {
    Writer w(path);
    write_header(w, Kind::TwoDPca);
    write_2dpca_body(w, model);
    w.finish();
}

TwoDPcaModel load_2dpca(const std::string& path) {
    Reader r(path);
    r.expect_header(Kind::TwoDPca);
    return read_2dpca_body(r);
}

void save_fld(const FldModel& model, const std::string& path) {
    Writer w(path);
    write_header(w, Kind::Fld);
    w.vector(model.overall_mean);
    w.matrix(model.within_scatter);
    w.matrix(model.between_scatter);
    w.matrix(model.axes);
    w.vector(model.fisher_ratios);
    w.u32(static_cast<uint32_t>(model.class_names.size()));
    for (const auto& name : model.class_names) w.str(name);
    w.matrix(model.class_means);
    w.finish();
}

FldModel load_fld(const std::string& path) {
    Reader r(path);
    r.expect_header(Kind::Fld);
    FldModel model;
    model.overall_mean = r.vector();
    model.within_scatter = r.matrix();
    model.between_scatter = r.matrix();
    model.axes = r.matrix();
    model.fisher_ratios = r.vector();
    const uint32_t n = r.u32();
    for (uint32_t i = 0; i < n; ++i) model.class_names.push_back(r.str());
    model.class_means = r.matrix();
    return model;
}

void save_au_gallery(const AuTemplateGallery& gallery, const std::string& path) {
    Writer w(path);
    write_header(w, Kind::AuGallery);
    w.u32(static_cast<uint32_t>(gallery.regions.size()));
    for (const auto& [region, entry] : gallery.regions) {
        w.str(facs::region_spec(region).name);
        w.u32(static_cast<uint32_t>(entry.chip_width));
        w.u32(static_cast<uint32_t>(entry.chip_height));
        write_2dpca_body(w, entry.model);
        w.u32(static_cast<uint32_t>(entry.templates.size()));
        for (const auto& tmpl : entry.templates) {
            w.u32(static_cast<uint32_t>(tmpl.au));
            w.vector(tmpl.feature);
        }
    }
    w.finish();
}

AuTemplateGallery load_au_gallery(const std::string& path) {
    Reader r(path);
    r.expect_header(Kind::AuGallery);
    AuTemplateGallery gallery;
    const uint32_t regions = r.u32();
    for (uint32_t i = 0; i < regions; ++i) {
        const std::string name = r.str();
        facs::Region region = facs::Region::Cheeks;
        bool found = false;
        for (const auto& spec : facs::region_table())
            if (spec.name == name) {
                region = spec.region;
                found = true;
            }
        if (!found) r.fail("unknown region name: " + name);
        AuTemplateGallery::RegionEntry entry;
        entry.chip_width = static_cast<int>(r.u32());
        entry.chip_height = static_cast<int>(r.u32());
        entry.model = read_2dpca_body(r);
        const uint32_t count = r.u32();
        for (uint32_t t = 0; t < count; ++t) {
            AuTemplateGallery::Template tmpl;
            tmpl.au = static_cast<int>(r.u32());
            tmpl.feature = r.vector();
            entry.templates.push_back(std::move(tmpl));
        }
        gallery.regions[region] = std::move(entry);
    }
    return gallery;
}

void save_fused_gallery(const FusedGallery& gallery, const std::string& path) {
    Writer w(path);
    write_header(w, Kind::FusedGallery);
    w.u32(static_cast<uint32_t>(gallery.identities.size()));
    for (size_t i = 0; i < gallery.identities.size(); ++i) {
        w.str(gallery.identities[i]);
        w.vector(gallery.vectors[i]);
    }
    w.f64(gallery.phi);
    w.finish();
}

FusedGallery load_fused_gallery(const std::string& path) {
    Reader r(path);
    r.expect_header(Kind::FusedGallery);
    FusedGallery gallery;
    const uint32_t n = r.u32();
    for (uint32_t i = 0; i < n; ++i) {
        gallery.identities.push_back(r.str());
        gallery.vectors.push_back(r.vector());
    }
    gallery.phi = r.f64();
    return gallery;
}

} // namespace facsca::features::model_io
