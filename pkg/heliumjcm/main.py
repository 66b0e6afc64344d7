#! /usr/bin/env python3

# ########################################################################################## #
#                                                                                            #
# Main: HeliumJCM entry point                                                                #
#                                                                                            #
# MIT License   Refer to https://opensource.org/license/mit                                  #
#                                                                                            #
# ########################################################################################## #

from heliumjcm.src import jcmrun


def main():
    """
    Kick off the main program: jcmrun.run_heliumjcm
    """

    return_code = jcmrun.run_heliumjcm()
    exit(return_code)


if __name__ == "__main__":
    main()
