#ifndef ROTLAB_H
#define ROTLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RotStatus {
  ROT_STATUS_OK = 0,
  ROT_STATUS_NULL_POINTER = 1,
  ROT_STATUS_INVALID_UTF8 = 2,
  ROT_STATUS_DIMENSION = 3,
  ROT_STATUS_VALIDATION = 4,
  ROT_STATUS_NUMERIC = 5,
  ROT_STATUS_PRECONDITION = 6,
  ROT_STATUS_CAPABILITY = 7,
  ROT_STATUS_CONSISTENCY = 8,
  ROT_STATUS_PANIC = 9,
} RotStatus;

// Opaque transcript of one honest run.
typedef struct RotTranscript RotTranscript;

typedef struct RotCheatProfile {
  double p_a_star;
  double p_b_star;
  double gamma_a;
  double gamma_b;
  double gamma;
  bool admissible;
} RotCheatProfile;

typedef struct RotBalanceResult {
  double z_bias;
  double gamma_a;
  double gamma_b;
  double gamma;
  bool strict_improvement;
} RotBalanceResult;

// Honest ROT outcome; `g_hat` is -1 for NULL.
typedef struct RotOutcomeC {
  int8_t g_hat;
  uint8_t assert_bit;
  uint8_t bob_bit;
  bool aborted;
} RotOutcomeC;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *rot_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void rot_string_free(char *s);

// Cheating profile for probabilities `p_a`, `p_b`.
//
// # Safety
// `out` must be valid for writes.
enum RotStatus rot_advantage(double p_a, double p_b, struct RotCheatProfile *out);

// Balances an Alice-preferred profile against a Bob-preferred one. Only
// the cheating probabilities of the inputs are read.
//
// # Safety
// Input pointers must be valid for reads, `out` for writes.
enum RotStatus rot_balance(const struct RotCheatProfile *alice_pref,
                           const struct RotCheatProfile *bob_pref,
                           struct RotBalanceResult *out);

// Smallest advantage compatible with the coin-flipping bound.
//
// # Safety
// `out` must be valid for writes.
enum RotStatus rot_kitaev_min_advantage(double ideal_a, double ideal_b, double *out);

// Alice's success probability in the qutrit protocol for amplitudes
// `(alpha, beta, gamma_amp)`.
//
// # Safety
// `out` must be valid for writes.
enum RotStatus rot_alice_qutrit_cheat_prob(double alpha,
                                           double beta,
                                           double gamma_amp,
                                           double *out);

// Maximizes Alice's qutrit success probability; writes the maximizing
// amplitudes to `triple[0..3]` and the value to `out`.
//
// # Safety
// `triple` must be valid for three writes and `out` for one.
enum RotStatus rot_optimize_alice_qutrit(double tolerance, double *triple, double *out);

// Headline report as canonical JSON. Free with [`rot_string_free`].
//
// # Safety
// `out` must be valid for writes.
enum RotStatus rot_headline_json(char **out);

// Runs one honest execution of `protocol` (`bad_classical`, `bad_qubit`,
// `qutrit`, `sequence`, or `coinflip_reduction` over the qutrit protocol).
// `n_states` is read only for `sequence`.
//
// # Safety
// `protocol` must be a NUL-terminated string; `out` valid for writes.
// Release the handle with [`rot_transcript_free`].
enum RotStatus rot_transcript_run(const char *protocol,
                                  uint64_t seed,
                                  size_t n_states,
                                  struct RotTranscript **out);

// Number of messages in the transcript.
//
// # Safety
// `handle` must be a live handle and `out` valid for writes.
enum RotStatus rot_transcript_len(const struct RotTranscript *handle, size_t *out);

// The transcript as JSON lines. Free with [`rot_string_free`].
//
// # Safety
// `handle` must be a live handle and `out` valid for writes.
enum RotStatus rot_transcript_jsonl(const struct RotTranscript *handle, char **out);

// ROT outcome of the run (the first one for `sequence`). Capability error
// for coin-flip transcripts.
//
// # Safety
// `handle` must be a live handle and `out` valid for writes.
enum RotStatus rot_transcript_outcome(const struct RotTranscript *handle, struct RotOutcomeC *out);

// Releases a transcript handle. Null is ignored.
//
// # Safety
// `handle` must come from [`rot_transcript_run`] and not have been freed.
void rot_transcript_free(struct RotTranscript *handle);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROTLAB_H */
