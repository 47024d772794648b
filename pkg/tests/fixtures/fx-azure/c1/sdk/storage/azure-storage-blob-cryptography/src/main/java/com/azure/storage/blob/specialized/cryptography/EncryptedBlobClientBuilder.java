// Copyright (c) Microsoft Corporation. All rights reserved.
// Licensed under the MIT License.

package com.azure.storage.blob.specialized.cryptography;

import com.azure.storage.blob.BlobClientBuilder;
import com.azure.storage.common.StorageSharedKeyCredential;
import java.io.IOException;
import java.io.InputStream;
import java.io.OutputStream;
import java.io.UncheckedIOException;
import java.net.MalformedURLException;
import java.net.URL;
import java.nio.ByteBuffer;
import java.nio.charset.StandardCharsets;
import java.security.InvalidKeyException;
import java.security.NoSuchAlgorithmException;
import java.security.SecureRandom;
import java.time.Duration;
import java.time.OffsetDateTime;
import java.util.ArrayList;
import java.util.Base64;
import java.util.Collections;
import java.util.HashMap;
import java.util.List;
import java.util.Locale;
import java.util.Map;
import java.util.Objects;
import java.util.Optional;
import java.util.function.Supplier;
import javax.crypto.Cipher;
import javax.crypto.SecretKey;

/**
 * This class provides a fluent builder API to help aid the configuration and instantiation of
 * {@link EncryptedBlobClient EncryptedBlobClients}. Call {@link #buildEncryptedBlobClient()}
 * to construct a client once the desired settings are applied.
 */
public final class EncryptedBlobClientBuilder {
    private static final String CLIENT_NAME = "azure-storage-blob-cryptography";

    private String endpoint;
    private String accountName;
    private String containerName;
    private String blobName;
    private String snapshot;
    private String versionId;
    private String encryptionScope;
    private String customerProvidedKey;
    private String keyWrapAlgorithm;
    private String serviceVersion;
    private String retryPolicy;
    private String httpLogLevel;
    private String applicationId;
    private String requiresEncryption;
    private String keyId;
    private String pipelinePolicy;
    private String clientOptions;
    private String configuration;
    private String audience;
    private String region;
    private String blobType;
    private String leaseId;
    private String tagsConditions;
    private String contentLanguage;
    private String cacheControl;
    private String contentDisposition;
    private String contentEncoding;
    private String accessTier;
    private String legalHold;
    private StorageSharedKeyCredential storageSharedKeyCredential;

    /**
     * Creates a new instance of the EncryptedBlobClientBuilder.
     */
    public EncryptedBlobClientBuilder() {
    }

    /**
     * Sets the {@link StorageSharedKeyCredential} used to authorize requests.
     *
     * @param credential the shared key credential
     * @return the updated builder
     */
    public EncryptedBlobClientBuilder credential(StorageSharedKeyCredential credential) {
        this.storageSharedKeyCredential = Objects.requireNonNull(credential,
            "'credential' cannot be null.");
        return this;
    }

    /**
     * Sets the endpoint.
     */
    public EncryptedBlobClientBuilder endpoint(String endpoint) {
        this.endpoint = endpoint;
        return this;
    }

    /**
     * Sets the accountName.
     */
    public EncryptedBlobClientBuilder accountName(String accountName) {
        this.accountName = accountName;
        return this;
    }

    /**
     * Sets the containerName.
     */
    public EncryptedBlobClientBuilder containerName(String containerName) {
        this.containerName = containerName;
        return this;
    }

    /**
     * Sets the blobName.
     */
    public EncryptedBlobClientBuilder blobName(String blobName) {
        this.blobName = blobName;
        return this;
    }

    /**
     * Sets the snapshot.
     */
    public EncryptedBlobClientBuilder snapshot(String snapshot) {
        this.snapshot = snapshot;
        return this;
    }

    /**
     * Sets the versionId.
     */
    public EncryptedBlobClientBuilder versionId(String versionId) {
        this.versionId = versionId;
        return this;
    }

    /**
     * Sets the encryptionScope.
     */
    public EncryptedBlobClientBuilder encryptionScope(String encryptionScope) {
        this.encryptionScope = encryptionScope;
        return this;
    }

    /**
     * Sets the customerProvidedKey.
     */
    public EncryptedBlobClientBuilder customerProvidedKey(String customerProvidedKey) {
        this.customerProvidedKey = customerProvidedKey;
        return this;
    }

    /**
     * Sets the keyWrapAlgorithm.
     */
    public EncryptedBlobClientBuilder keyWrapAlgorithm(String keyWrapAlgorithm) {
        this.keyWrapAlgorithm = keyWrapAlgorithm;
        return this;
    }

    /**
     * Sets the serviceVersion.
     */
    public EncryptedBlobClientBuilder serviceVersion(String serviceVersion) {
        this.serviceVersion = serviceVersion;
        return this;
    }

    /**
     * Sets the retryPolicy.
     */
    public EncryptedBlobClientBuilder retryPolicy(String retryPolicy) {
        this.retryPolicy = retryPolicy;
        return this;
    }

    /**
     * Sets the httpLogLevel.
     */
    public EncryptedBlobClientBuilder httpLogLevel(String httpLogLevel) {
        this.httpLogLevel = httpLogLevel;
        return this;
    }

    /**
     * Sets the applicationId.
     */
    public EncryptedBlobClientBuilder applicationId(String applicationId) {
        this.applicationId = applicationId;
        return this;
    }

    /**
     * Sets the requiresEncryption.
     */
    public EncryptedBlobClientBuilder requiresEncryption(String requiresEncryption) {
        this.requiresEncryption = requiresEncryption;
        return this;
    }

    /**
     * Sets the keyId.
     */
    public EncryptedBlobClientBuilder keyId(String keyId) {
        this.keyId = keyId;
        return this;
    }

    /**
     * Sets the pipelinePolicy.
     */
    public EncryptedBlobClientBuilder pipelinePolicy(String pipelinePolicy) {
        this.pipelinePolicy = pipelinePolicy;
        return this;
    }

    /**
     * Sets the clientOptions.
     */
    public EncryptedBlobClientBuilder clientOptions(String clientOptions) {
        this.clientOptions = clientOptions;
        return this;
    }

    /**
     * Sets the configuration.
     */
    public EncryptedBlobClientBuilder configuration(String configuration) {
        this.configuration = configuration;
        return this;
    }

    /**
     * Sets the audience.
     */
    public EncryptedBlobClientBuilder audience(String audience) {
        this.audience = audience;
        return this;
    }

    /**
     * Sets the region.
     */
    public EncryptedBlobClientBuilder region(String region) {
        this.region = region;
        return this;
    }

    /**
     * Sets the blobType.
     */
    public EncryptedBlobClientBuilder blobType(String blobType) {
        this.blobType = blobType;
        return this;
    }

    /**
     * Creates an {@link EncryptedBlobClient} based on options set in the builder.
     *
     * @return a client wrapping a plain blob client
     */
    public EncryptedBlobClient buildEncryptedBlobClient() {
        BlobClientBuilder builder = new BlobClientBuilder().endpoint(endpoint);
        return new EncryptedBlobClient(builder.buildClient(), keyWrapAlgorithm);
    }
}
