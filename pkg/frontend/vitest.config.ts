import { defineConfig } from "vitest/config";

export default defineConfig({
    test: {
        environment: "jsdom",
        include: ["tests/**/*.test.ts"],
        // the e2e test boots the real game service
        testTimeout: 120_000,
        hookTimeout: 120_000,
    },
});
