#pragma once

#include <vector>

#include "tpfem/linalg.hpp"
#include "tpfem/mesh.hpp"

namespace tpfem {

/// Bilinear forms over a single subdomain. Entry [k, i] of an assembled
/// matrix pairs test function k with trial function i.
struct FormKind {
    enum class Tag {
        mass,                 // (phi_i, gamma_k)
        stiffness,            // (grad phi_i, grad gamma_k)
        advection,            // (b . grad phi_i, gamma_k)
        advection_transpose,  // (phi_i, b . grad gamma_k)
        supg_advection,       // (b . grad phi_i, b . grad gamma_k)
        laplacian_advection,  // (lap phi_i, b . grad gamma_k)
        laplacian_mass,       // (lap phi_i, gamma_k)
        temporal_stiffness_with_boundary,
    };

    Tag tag;
    std::vector<double> velocity;

    static FormKind mass() { return {Tag::mass, {}}; }
    static FormKind stiffness() { return {Tag::stiffness, {}}; }
    static FormKind advection(std::vector<double> b) { return {Tag::advection, std::move(b)}; }
    static FormKind advection_transpose(std::vector<double> b) { return {Tag::advection_transpose, std::move(b)}; }
    static FormKind supg_advection(std::vector<double> b) { return {Tag::supg_advection, std::move(b)}; }
    static FormKind laplacian_advection(std::vector<double> b) { return {Tag::laplacian_advection, std::move(b)}; }
    static FormKind laplacian_mass() { return {Tag::laplacian_mass, {}}; }
    static FormKind temporal_stiffness_with_boundary() { return {Tag::temporal_stiffness_with_boundary, {}}; }
};

struct VectorFormKind {
    enum class Tag {
        load,       // (gamma_k)
        supg_load,  // (b . grad gamma_k)
    };

    Tag tag;
    std::vector<double> velocity;

    static VectorFormKind load() { return {Tag::load, {}}; }
    static VectorFormKind supg_load(std::vector<double> b) { return {Tag::supg_load, std::move(b)}; }
};

SparseMatrix assemble_matrix(const Mesh& mesh, const FormKind& kind);
Vector assemble_vector(const Mesh& mesh, const VectorFormKind& kind);

/// Every subdomain building block for one velocity restricted to that
/// subdomain. The laplacian entries are exact zero matrices for P1.
struct SubdomainForms {
    SparseMatrix mass;
    SparseMatrix stiffness;
    SparseMatrix advection;
    SparseMatrix advection_transpose;
    SparseMatrix supg_advection;
    SparseMatrix laplacian_advection;
    SparseMatrix laplacian_mass;
    Vector load;
    Vector supg_load;
};

SubdomainForms assemble_forms(const Mesh& mesh, const std::vector<double>& velocity);

}  // namespace tpfem
