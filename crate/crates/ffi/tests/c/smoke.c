#include <stdio.h>
#include <string.h>

#include "qpos.h"

static int fail(const char *what) {
    const char *msg = qpos_last_error();
    fprintf(stderr, "%s: %s\n", what, msg ? msg : "(no message)");
    return 1;
}

int main(void) {
    const char *corpus = "the\tDT\ndog\tNN\nbarks\tVB\n\nthe\tDT\ncat\tNN\nsleeps\tVB\n";
    QposModel *model = NULL;
    if (qpos_model_train(corpus, 1.0, &model) != QPOS_STATUS_OK) return fail("train");

    const char *words[] = {"the", "cat", "barks"};
    size_t tags[3];
    double score = 0.0;
    if (qpos_tag(model, words, 3, QPOS_BACKEND_CLASSICAL, 0, 1, tags, &score) != QPOS_STATUS_OK)
        return fail("tag");
    for (size_t i = 0; i < 3; i++) printf("%s/%s\n", words[i], qpos_model_tag_label(model, tags[i]));
    printf("score %.6e\n", score);

    if (qpos_tag(NULL, words, 3, QPOS_BACKEND_CLASSICAL, 0, 1, tags, &score) != QPOS_STATUS_NULL_POINTER)
        return fail("null model accepted");
    qpos_model_free(model);

    double values[] = {0.2, 0.9, 0.4, 0.1};
    double best = 0.0;
    size_t index = 0;
    if (qpos_quantum_max(values, 4, 7, &best, &index, NULL) != QPOS_STATUS_OK) return fail("qmax");
    printf("max %.1f at %zu\n", best, index);

    QposZxReport report;
    if (qpos_zx_optimize("H 0\nCNOT 0 1\nCNOT 1 2\n", false, true, &report) != QPOS_STATUS_OK)
        return fail("zx");
    printf("zx %zu -> %zu verified %d\n", report.t_before, report.t_after, report.verified);
    return 0;
}
