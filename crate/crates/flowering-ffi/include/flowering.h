/* C interface for the flowering proximity-testing library.
 *
 * Status codes: every function returns one of the FLW_* values below;
 * out-values are written through pointers. FLW_REJECT is a verification
 * verdict, not an error. Buffers returned by the library are owned by it
 * and must be released with flw_buffer_free; instances with
 * flw_instance_free. Null handles or pointers yield FLW_BAD_ARGUMENT.
 */

#ifndef FLOWERING_H
#define FLOWERING_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define FLW_OK 0
#define FLW_REJECT 1
#define FLW_BAD_ARGUMENT 2
#define FLW_MALFORMED 3
#define FLW_INTERNAL 4

/* Opaque protocol instance: graph family, cut schedule, parameters. */
typedef struct FlwInstance FlwInstance;

/* Opaque byte buffer owned by the library. */
typedef struct FlwBuffer FlwBuffer;

/* Instance over the 12-vertex alternating-group graph (3 rounds). */
int32_t flw_instance_new_a4(uint64_t modulus, uint32_t k, uint32_t reps,
                            uint32_t edges_per_check, FlwInstance **out);

/* Instance over the rank-r boolean-vector group (halving schedule). */
int32_t flw_instance_new_z2r(uint32_t rank, uint64_t modulus, uint32_t k,
                             uint32_t reps, uint32_t edges_per_check,
                             FlwInstance **out);

/* Instance over the (p+1)-regular Ramanujan graph (round-robin schedule). */
int32_t flw_instance_new_lps(uint64_t p, uint64_t q, uint64_t modulus,
                             uint32_t k, uint32_t reps,
                             uint32_t edges_per_check, FlwInstance **out);

void flw_instance_free(FlwInstance *inst);

/* Code length (number of base-graph edges). */
int32_t flw_instance_edge_count(const FlwInstance *inst, uint64_t *out);

/* Number of cut/fold rounds. */
int32_t flw_instance_rounds(const FlwInstance *inst, uint64_t *out);

void flw_buffer_free(FlwBuffer *buf);
const uint8_t *flw_buffer_data(const FlwBuffer *buf);
size_t flw_buffer_len(const FlwBuffer *buf);

/* Uniformly random codeword, serialized in the word file format
 * ("word <edges> <modulus>\n" + canonical bytes). */
int32_t flw_sample_codeword(FlwInstance *inst, uint64_t seed,
                            FlwBuffer **out);

/* Non-interactive proof for a word in word file format. */
int32_t flw_prove(const FlwInstance *inst, const uint8_t *word,
                  size_t word_len, FlwBuffer **out);

/* FLW_OK on accept, FLW_REJECT on reject, FLW_MALFORMED if the bytes do
 * not parse against the instance. */
int32_t flw_verify(const FlwInstance *inst, const uint8_t *proof,
                   size_t proof_len);

/* Interactive-mode acceptance estimate over `trials` seeded executions.
 * strategy: 0 = fold honestly, 1 = swap in fresh codewords per round.
 * Writes the acceptance rate and the 99% Wilson half-width. */
int32_t flw_simulate(const FlwInstance *inst, const uint8_t *word,
                     size_t word_len, int32_t strategy, uint64_t trials,
                     uint64_t seed, double *out_rate, double *out_halfwidth);

/* Library version as a static string. */
const char *flw_version(void);

#ifdef __cplusplus
}
#endif

#endif /* FLOWERING_H */
