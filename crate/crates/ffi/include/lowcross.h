#ifndef LOWCROSS_H
#define LOWCROSS_H

/* Generated by cbindgen from the lowcross-ffi crate. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum LcStatus {
  LC_STATUS_OK = 0,
  LC_STATUS_NULL_POINTER = 1,
  LC_STATUS_INVALID_ARGUMENT = 2,
  LC_STATUS_PARSE = 3,
  LC_STATUS_STATE = 4,
  LC_STATUS_IO = 5,
  LC_STATUS_CONFIG = 6,
  LC_STATUS_PANIC = 7,
} LcStatus;

typedef enum LcAlgorithm {
  LC_ALGORITHM_GREEDY = 0,
  LC_ALGORITHM_MIN_WEIGHT = 1,
  LC_ALGORITHM_PART_AT_ONCE = 2,
} LcAlgorithm;

/**
 * Opaque partition handle.
 */
typedef struct LcPartition LcPartition;

/**
 * Opaque set system handle.
 */
typedef struct LcSetSystem LcSetSystem;

/**
 * Parameters of [`lc_partition_run`]. Zero `w` or `threads` selects the
 * library default.
 */
typedef struct LcPartitionOptions {
  size_t t;
  double d;
  enum LcAlgorithm algorithm;
  uint64_t seed;
  size_t w;
  size_t threads;
  /**
   * Nonzero selects the theoretical (part-index scaled) potential.
   */
  uint8_t theoretical;
} LcPartitionOptions;

typedef struct LcRunSummary {
  uint32_t kappa;
  uint64_t violations_practical;
  uint64_t violations_theoretical;
  double runtime_ms;
} LcRunSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *lc_version(void);

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *lc_last_error_message(void);

/**
 * Builds a set system from compressed rows: range `f` holds
 * `indices[offsets[f] .. offsets[f + 1]]`. `offsets` has `m + 1` entries.
 */
enum LcStatus lc_setsystem_from_csr(size_t n,
                                    size_t m,
                                    const size_t *offsets,
                                    const size_t *indices,
                                    struct LcSetSystem **out);

enum LcStatus lc_setsystem_read_file(const char *path, struct LcSetSystem **out);

enum LcStatus lc_setsystem_write_file(const struct LcSetSystem *system, const char *path);

enum LcStatus lc_gen_grid(size_t n, size_t d, uint64_t seed, struct LcSetSystem **out);

enum LcStatus lc_gen_random_halfspaces(size_t n,
                                       size_t d,
                                       size_t m,
                                       uint64_t seed,
                                       struct LcSetSystem **out);

/**
 * Radius-`r` neighborhoods of a seeded power-law random graph.
 */
enum LcStatus lc_gen_powerlaw(size_t n,
                              double beta,
                              uint32_t r,
                              uint64_t seed,
                              struct LcSetSystem **out);

enum LcStatus lc_gen_projective_plane(uint64_t order, struct LcSetSystem **out);

enum LcStatus lc_gen_circle_disks(size_t n,
                                  size_t circles,
                                  size_t m,
                                  uint64_t seed,
                                  struct LcSetSystem **out);

/**
 * Element count, or 0 for a null handle.
 */
size_t lc_setsystem_n(const struct LcSetSystem *system);

/**
 * Range count, or 0 for a null handle.
 */
size_t lc_setsystem_m(const struct LcSetSystem *system);

void lc_setsystem_free(struct LcSetSystem *system);

/**
 * Partitions `system`. `summary` may be null.
 */
enum LcStatus lc_partition_run(const struct LcSetSystem *system,
                               const struct LcPartitionOptions *options,
                               struct LcPartition **out,
                               struct LcRunSummary *summary);

/**
 * Wraps an assignment of `n` elements to part ids in `[0, t)`.
 */
enum LcStatus lc_partition_from_assignment(size_t n,
                                           const uint32_t *part_of,
                                           size_t t,
                                           struct LcPartition **out);

enum LcStatus lc_partition_read_file(const char *path, struct LcPartition **out);

enum LcStatus lc_partition_write_file(const struct LcPartition *partition, const char *path);

size_t lc_partition_n(const struct LcPartition *partition);

size_t lc_partition_t(const struct LcPartition *partition);

/**
 * Copies the part id of every element into `buf`, which must hold at
 * least `lc_partition_n` entries.
 */
enum LcStatus lc_partition_assignment(const struct LcPartition *partition,
                                      uint32_t *buf,
                                      size_t len);

void lc_partition_free(struct LcPartition *partition);

enum LcStatus lc_crossing_number(const struct LcSetSystem *system,
                                 const struct LcPartition *partition,
                                 uint32_t *kappa);

/**
 * Stores the number of violated partition conditions; 0 means valid.
 */
enum LcStatus lc_validate_partition(const struct LcSetSystem *system,
                                    const struct LcPartition *partition,
                                    size_t *violations);

enum LcStatus lc_error_factor(const struct LcSetSystem *system,
                              const size_t *elements,
                              size_t len,
                              double *epsilon);

/**
 * Error factor of one uniformly chosen element per part.
 */
enum LcStatus lc_eps_approx_from_partition(const struct LcSetSystem *system,
                                           const struct LcPartition *partition,
                                           uint64_t seed,
                                           double *epsilon);

/**
 * Error factor of `size` elements drawn uniformly without replacement.
 */
enum LcStatus lc_uniform_sample_epsilon(const struct LcSetSystem *system,
                                        size_t size,
                                        uint64_t seed,
                                        double *epsilon);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOWCROSS_H */
