#include <stdio.h>
#include <string.h>
#include "witsets.h"

int main(void) {
    WsCode *code = NULL;
    bool holds = false;
    char *json = NULL;
    WsFamily *fam = ws_steiner_3_4_8();

    if (ws_family_code(fam, &code) != WS_STATUS_OK) return 1;
    if (ws_code_size(code) != 70) return 2;
    if (ws_verify(code, 4, &holds) != WS_STATUS_OK || !holds) return 3;
    ws_code_free(code);
    ws_family_free(fam);

    if (ws_sphere(2, 5, &code) != WS_STATUS_INVALID_ARGUMENT) return 4;
    if (ws_last_error() == NULL) return 5;

    if (ws_solve_json(4, 2, -1, 0.0, &json) != WS_STATUS_OK) return 6;
    if (strstr(json, "\"status\": \"exact\"") == NULL) return 7;
    ws_string_free(json);

    printf("ok %s\n", ws_version());
    return 0;
}
