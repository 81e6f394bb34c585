#include <stdio.h>
#include "cws_cluster.h"

int main(int argc, char **argv) {
    if (argc < 2) return 2;
    CwsCode *code = NULL;
    if (cws_code_load(argv[1], &code) != CWS_STATUS_OK) return 3;

    CwsDecoder *decoder = NULL;
    if (cws_decoder_new(code, 1, false, &decoder) != CWS_STATUS_OK) return 4;
    cws_code_free(code);

    CwsReport *report = NULL;
    CwsStatus s = cws_decoder_run(decoder, CWS_STRATEGY_CLUSTERED, CWS_BACKEND_DENSE, "Y3", 7, &report);
    if (s != CWS_STATUS_OK) return 5;
    char *recovery = cws_report_recovery(report);
    printf("recovered=%d measurements=%zu recovery=%s\n", cws_report_recovered(report),
           cws_report_measurements(report), recovery);
    cws_string_free(recovery);
    cws_report_free(report);
    cws_decoder_free(decoder);

    CwsCode *missing = NULL;
    s = cws_code_load("/nonexistent/code.cws", &missing);
    char *message = cws_last_error_message();
    printf("missing status=%d message=%s\n", (int)s, message ? message : "(none)");
    cws_string_free(message);
    return 0;
}
